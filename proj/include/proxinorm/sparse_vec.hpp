#pragma once

#include "proxinorm/rational.hpp"

#include <cstdint>
#include <initializer_list>
#include <map>
#include <utility>
#include <vector>

namespace proxinorm {

using Index = std::int64_t;

/// A finitely supported sequence of exact rationals with 1-based indices.
/// Serves both as an element of c00 and as a finitely supported functional
/// in l1; zero entries are never stored.
class SparseVec {
public:
  using Storage = std::map<Index, Rational>;

  SparseVec() = default;
  SparseVec(std::initializer_list<std::pair<const Index, Rational>> entries);

  static SparseVec unit(Index i, const Rational& value = 1);

  Rational operator[](Index i) const;
  void set(Index i, const Rational& value);

  bool is_zero() const { return entries_.empty(); }
  std::size_t nnz() const { return entries_.size(); }
  std::vector<Index> support() const;
  /// Largest index in the support; 0 for the zero vector.
  Index max_support() const;

  const Storage& entries() const { return entries_; }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  SparseVec& operator+=(const SparseVec& other);
  SparseVec& operator-=(const SparseVec& other);
  SparseVec& operator*=(const Rational& scale);

  friend SparseVec operator+(SparseVec a, const SparseVec& b) { return a += b; }
  friend SparseVec operator-(SparseVec a, const SparseVec& b) { return a -= b; }
  friend SparseVec operator*(const Rational& s, SparseVec a) { return a *= s; }
  friend SparseVec operator-(SparseVec a) { return a *= Rational(-1); }

  friend bool operator==(const SparseVec&, const SparseVec&) = default;
  /// Enumeration order: support tuple lexicographically, then the entries
  /// tuple lexicographically by numeric value.
  friend bool operator<(const SparseVec& a, const SparseVec& b);

private:
  Storage entries_;
};

/// <x, phi> = sum_i x_i phi_i.
Rational pair(const SparseVec& x, const SparseVec& phi);
Rational l1_norm(const SparseVec& x);
Rational sup_norm(const SparseVec& x);

/// The vector restricted to the given index set.
SparseVec restrict_to(const SparseVec& x, const std::vector<Index>& indices);

} // namespace proxinorm
