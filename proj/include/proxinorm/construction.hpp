#pragma once

#include "proxinorm/rational.hpp"
#include "proxinorm/sparse_vec.hpp"

#include <cstdint>
#include <deque>
#include <memory>
#include <shared_mutex>
#include <vector>

namespace proxinorm {

/// Height of a vector in c00(Q): the larger of its maximal support index
/// and the largest |p| + q over its entries p/q. height(0) = 1.
std::int64_t height(const SparseVec& x);

/// Streams every vector of height <= L for L = 1, 2, 3, ... Within a level
/// vectors are ordered by support tuple, then by entry tuple, both
/// lexicographically; the zero vector opens each level.
class LevelEnumerator {
public:
  LevelEnumerator();

  SparseVec next();
  std::int64_t level() const { return level_; }

private:
  void start_level(std::int64_t level);
  bool advance_entries();
  bool advance_support();
  SparseVec current() const;

  std::int64_t level_ = 0;
  std::vector<Rational> values_;
  std::vector<Index> support_;
  std::vector<std::size_t> digits_;
  bool fresh_ = true;
};

struct ConstructionParams {
  /// Largest k the table may be extended to.
  std::int64_t depth_budget = 5000;

  friend bool operator==(const ConstructionParams&, const ConstructionParams&) = default;
};

struct TableEntry {
  std::int64_t k;
  SparseVec u;
  std::int64_t a;
};

/// The sequences (u_k) and (a_k): u lists c00(Q) level by level, and a_k is
/// the least admissible value above a_{k-1} given the growth condition
/// a_k > max supp u_k, a_k >= ||u_k||_1.
///
/// The cache is append-only. Readers share a lock; extension takes it
/// exclusively. Entries live in a deque so references stay valid.
class ConstructionTable {
public:
  explicit ConstructionTable(ConstructionParams params = {});
  ConstructionTable(const ConstructionTable&) = delete;
  ConstructionTable& operator=(const ConstructionTable&) = delete;

  const ConstructionParams& params() const { return params_; }
  std::int64_t depth_budget() const { return params_.depth_budget; }

  /// The k-th pair (u_k, a_k), k >= 1. Throws BudgetError past the budget.
  const TableEntry& entry(std::int64_t k) const;
  /// a_k with a_0 = 0.
  std::int64_t a(std::int64_t k) const;
  /// Extends the cache through k.
  void ensure(std::int64_t k) const;
  std::int64_t cached() const;

  /// {a_k : k <= k_max, u_k = x}, increasing.
  std::vector<std::int64_t> a_set(const SparseVec& x, std::int64_t k_max) const;
  /// {k : k <= k_max, u_k = x}, increasing.
  std::vector<std::int64_t> positions(const SparseVec& x, std::int64_t k_max) const;

  /// Upper bound for sum_{k > K} 2^(-a_k^2) (1 + a_k):
  /// (16/13) (1 + m) 2^(-m^2) with m = a_K + 1.
  Rational tail_bound(std::int64_t K) const;

  /// Least K >= 1 with scale * tail_bound(K) < 2^-bits. Throws BudgetError
  /// when no K within the depth budget qualifies. Requires scale > 0.
  std::int64_t depth_for(const Rational& scale, std::int64_t bits) const;

private:
  void extend_locked(std::int64_t k) const;

  ConstructionParams params_;
  mutable std::shared_mutex mutex_;
  mutable std::deque<TableEntry> cache_;
  mutable LevelEnumerator enumerator_;
};

/// (16/13) (1 + m) 2^(-m^2), which dominates sum_{n >= m} (1 + n) 2^(-n^2)
/// for every m >= 1 (consecutive terms shrink by at least 3/16).
Rational series_tail_majorant(std::int64_t m);

} // namespace proxinorm
