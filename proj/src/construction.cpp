#include "proxinorm/construction.hpp"

#include "proxinorm/errors.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <string>

namespace proxinorm {

std::int64_t height(const SparseVec& x) {
  if (x.is_zero()) {
    return 1;
  }
  Integer best = x.max_support();
  for (const auto& [i, value] : x) {
    const Integer h = abs(value.get_num()) + value.get_den();
    if (h > best) {
      best = h;
    }
  }
  if (!best.fits_slong_p()) {
    throw BudgetError("vector height does not fit in 64 bits");
  }
  return best.get_si();
}

LevelEnumerator::LevelEnumerator() = default;

void LevelEnumerator::start_level(std::int64_t level) {
  level_ = level;
  values_.clear();
  for (std::int64_t q = 1; q < level; ++q) {
    for (std::int64_t p = 1; p + q <= level; ++p) {
      if (std::gcd(p, q) == 1) {
        values_.emplace_back(p, q);
        values_.emplace_back(-p, q);
      }
    }
  }
  for (auto& v : values_) {
    v.canonicalize();
  }
  std::sort(values_.begin(), values_.end());
  support_.clear();
  digits_.clear();
}

bool LevelEnumerator::advance_entries() {
  for (std::size_t pos = digits_.size(); pos-- > 0;) {
    if (++digits_[pos] < values_.size()) {
      return true;
    }
    digits_[pos] = 0;
  }
  return false;
}

bool LevelEnumerator::advance_support() {
  if (values_.empty()) {
    return false;
  }
  if (support_.empty()) {
    support_.push_back(1);
  } else if (support_.back() < level_) {
    support_.push_back(support_.back() + 1);
  } else {
    support_.pop_back();
    if (support_.empty()) {
      return false;
    }
    ++support_.back();
  }
  digits_.assign(support_.size(), 0);
  return true;
}

SparseVec LevelEnumerator::current() const {
  SparseVec out;
  for (std::size_t pos = 0; pos < support_.size(); ++pos) {
    out.set(support_[pos], values_[digits_[pos]]);
  }
  return out;
}

SparseVec LevelEnumerator::next() {
  if (level_ == 0) {
    start_level(1);
    fresh_ = false;
    return current();
  }
  if (fresh_) {
    fresh_ = false;
    return current();
  }
  if (advance_entries() || advance_support()) {
    return current();
  }
  start_level(level_ + 1);
  return current();
}

Rational series_tail_majorant(std::int64_t m) {
  return ratio(16 * (1 + m), 13) * pow2(-m * m);
}

ConstructionTable::ConstructionTable(ConstructionParams params) : params_(params) {
  if (params_.depth_budget < 1) {
    throw PreconditionError("depth budget must be positive");
  }
}

void ConstructionTable::extend_locked(std::int64_t k) const {
  while (static_cast<std::int64_t>(cache_.size()) < k) {
    const std::int64_t index = static_cast<std::int64_t>(cache_.size()) + 1;
    const std::int64_t previous = cache_.empty() ? 0 : cache_.back().a;
    SparseVec u = enumerator_.next();
    std::int64_t a = previous + 1;
    if (!u.is_zero()) {
      a = std::max(a, u.max_support() + 1);
      const Integer l1_ceiling = ceil(l1_norm(u));
      a = std::max(a, static_cast<std::int64_t>(l1_ceiling.get_si()));
      if (!(a > u.max_support() && Rational(a) >= l1_norm(u))) {
        throw std::logic_error("growth condition violated at k = " + std::to_string(index));
      }
    }
    cache_.push_back({index, std::move(u), a});
  }
}

void ConstructionTable::ensure(std::int64_t k) const {
  if (k > params_.depth_budget) {
    throw BudgetError("k = " + std::to_string(k) + " exceeds the depth budget " +
                      std::to_string(params_.depth_budget));
  }
  {
    std::shared_lock lock(mutex_);
    if (static_cast<std::int64_t>(cache_.size()) >= k) {
      return;
    }
  }
  std::unique_lock lock(mutex_);
  extend_locked(k);
}

const TableEntry& ConstructionTable::entry(std::int64_t k) const {
  if (k < 1) {
    throw PreconditionError("table index must be >= 1");
  }
  ensure(k);
  std::shared_lock lock(mutex_);
  return cache_[static_cast<std::size_t>(k - 1)];
}

std::int64_t ConstructionTable::a(std::int64_t k) const { return k == 0 ? 0 : entry(k).a; }

std::int64_t ConstructionTable::cached() const {
  std::shared_lock lock(mutex_);
  return static_cast<std::int64_t>(cache_.size());
}

std::vector<std::int64_t> ConstructionTable::positions(const SparseVec& x, std::int64_t k_max) const {
  ensure(k_max);
  std::vector<std::int64_t> out;
  for (std::int64_t k = 1; k <= k_max; ++k) {
    if (entry(k).u == x) {
      out.push_back(k);
    }
  }
  return out;
}

std::vector<std::int64_t> ConstructionTable::a_set(const SparseVec& x, std::int64_t k_max) const {
  std::vector<std::int64_t> out = positions(x, k_max);
  for (auto& k : out) {
    k = entry(k).a;
  }
  return out;
}

Rational ConstructionTable::tail_bound(std::int64_t K) const {
  if (K < 0) {
    throw PreconditionError("tail_bound requires K >= 0");
  }
  return series_tail_majorant(a(K) + 1);
}

std::int64_t ConstructionTable::depth_for(const Rational& scale, std::int64_t bits) const {
  if (sgn(scale) <= 0) {
    throw PreconditionError("depth_for requires a positive scale");
  }
  const std::int64_t scale_log = floor_log2(scale);
  for (std::int64_t K = 1; K <= params_.depth_budget; ++K) {
    const std::int64_t m = a(K) + 1;
    // scale (16/13)(1+m) 2^(-m^2) < 2^(-bits)  <=>  floor_log2(scale (16/13)(1+m)) < m^2 - bits
    if (m * m <= bits + scale_log) {
      continue;
    }
    const Rational lead = scale * ratio(16 * (1 + m), 13);
    if (floor_log2(lead) < m * m - bits) {
      return K;
    }
  }
  throw BudgetError("no truncation depth within budget " + std::to_string(params_.depth_budget) +
                    " reaches 2^-" + std::to_string(bits));
}

} // namespace proxinorm
