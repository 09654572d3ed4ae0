#include "proxinorm/sparse_vec.hpp"

#include "proxinorm/errors.hpp"

#include <algorithm>
#include <string>

namespace proxinorm {

SparseVec::SparseVec(std::initializer_list<std::pair<const Index, Rational>> entries) {
  for (const auto& [i, value] : entries) {
    set(i, value);
  }
}

SparseVec SparseVec::unit(Index i, const Rational& value) {
  SparseVec out;
  out.set(i, value);
  return out;
}

Rational SparseVec::operator[](Index i) const {
  const auto it = entries_.find(i);
  return it == entries_.end() ? Rational(0) : it->second;
}

void SparseVec::set(Index i, const Rational& value) {
  if (i < 1) {
    throw PreconditionError("sequence indices are 1-based, got " + std::to_string(i));
  }
  if (sgn(value) == 0) {
    entries_.erase(i);
  } else {
    entries_[i] = value;
  }
}

std::vector<Index> SparseVec::support() const {
  std::vector<Index> out;
  out.reserve(entries_.size());
  for (const auto& [i, value] : entries_) {
    out.push_back(i);
  }
  return out;
}

Index SparseVec::max_support() const { return entries_.empty() ? 0 : entries_.rbegin()->first; }

SparseVec& SparseVec::operator+=(const SparseVec& other) {
  for (const auto& [i, value] : other.entries_) {
    auto it = entries_.find(i);
    if (it == entries_.end()) {
      entries_.emplace(i, value);
    } else {
      it->second += value;
      if (sgn(it->second) == 0) {
        entries_.erase(it);
      }
    }
  }
  return *this;
}

SparseVec& SparseVec::operator-=(const SparseVec& other) {
  for (const auto& [i, value] : other.entries_) {
    auto it = entries_.find(i);
    if (it == entries_.end()) {
      entries_.emplace(i, -value);
    } else {
      it->second -= value;
      if (sgn(it->second) == 0) {
        entries_.erase(it);
      }
    }
  }
  return *this;
}

SparseVec& SparseVec::operator*=(const Rational& scale) {
  if (sgn(scale) == 0) {
    entries_.clear();
    return *this;
  }
  for (auto& [i, value] : entries_) {
    value *= scale;
  }
  return *this;
}

bool operator<(const SparseVec& a, const SparseVec& b) {
  const bool support_less = std::lexicographical_compare(
      a.entries_.begin(), a.entries_.end(), b.entries_.begin(), b.entries_.end(),
      [](const auto& lhs, const auto& rhs) { return lhs.first < rhs.first; });
  const bool support_greater = std::lexicographical_compare(
      b.entries_.begin(), b.entries_.end(), a.entries_.begin(), a.entries_.end(),
      [](const auto& lhs, const auto& rhs) { return lhs.first < rhs.first; });
  if (support_less || support_greater) {
    return support_less;
  }
  return std::lexicographical_compare(a.entries_.begin(), a.entries_.end(), b.entries_.begin(), b.entries_.end(),
                                      [](const auto& lhs, const auto& rhs) { return lhs.second < rhs.second; });
}

Rational pair(const SparseVec& x, const SparseVec& phi) {
  const SparseVec& small = x.nnz() <= phi.nnz() ? x : phi;
  const SparseVec& large = x.nnz() <= phi.nnz() ? phi : x;
  Rational sum = 0;
  for (const auto& [i, value] : small) {
    const auto& entries = large.entries();
    const auto it = entries.find(i);
    if (it != entries.end()) {
      sum += value * it->second;
    }
  }
  return sum;
}

Rational l1_norm(const SparseVec& x) {
  Rational sum = 0;
  for (const auto& [i, value] : x) {
    sum += abs(value);
  }
  return sum;
}

Rational sup_norm(const SparseVec& x) {
  Rational best = 0;
  for (const auto& [i, value] : x) {
    const Rational magnitude = abs(value);
    if (magnitude > best) {
      best = magnitude;
    }
  }
  return best;
}

SparseVec restrict_to(const SparseVec& x, const std::vector<Index>& indices) {
  SparseVec out;
  for (const Index i : indices) {
    out.set(i, x[i]);
  }
  return out;
}

} // namespace proxinorm
