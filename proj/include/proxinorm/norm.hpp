#pragma once

#include "proxinorm/construction.hpp"
#include "proxinorm/rational.hpp"
#include "proxinorm/sparse_vec.hpp"

#include <cstdint>

namespace proxinorm {

inline constexpr std::int64_t kDefaultPrecisionBits = 64;
inline constexpr std::int64_t kDefaultPrecisionCap = std::int64_t{1} << 22;

/// Exact rational interval [lo, hi] holding the value of a truncated
/// series; depth is the truncation index K.
struct Enclosure {
  Rational lo;
  Rational hi;
  std::int64_t depth = 1;

  Rational width() const { return hi - lo; }
  bool contains(const Rational& value) const { return lo <= value && value <= hi; }
  friend bool operator==(const Enclosure&, const Enclosure&) = default;
};

bool intersects(const Enclosure& a, const Enclosure& b);

/// The norm ||x||_0 + sum_k 2^(-a_k^2) |<x, u_k - e_{a_k}>| truncated at K,
/// enclosed as [S_K, S_K + ||x||_0 tail_bound(K)].
Enclosure read_norm_at_depth(const ConstructionTable& table, const SparseVec& x, std::int64_t depth);

/// Certified enclosure of width < 2^-precision_bits with the least depth
/// that achieves it.
Enclosure read_norm(const ConstructionTable& table, const SparseVec& x,
                    std::int64_t precision_bits = kDefaultPrecisionBits,
                    std::int64_t precision_cap = kDefaultPrecisionCap);

/// ||x||_0 <= lo and hi <= 3 ||x||_0 for the certified enclosure. x != 0.
bool equivalence_check(const ConstructionTable& table, const SparseVec& x,
                       std::int64_t precision_bits = kDefaultPrecisionBits);

enum class Order { Less, Greater, Unknown };

struct NormComparison {
  Order order = Order::Unknown;
  Enclosure first;
  Enclosure second;
  /// Overlap width when the enclosures could not be separated.
  Rational residual_width;
};

/// Separates ||x|| from ||y|| by doubling precision from `start_bits` up to
/// `precision_cap`. Equal inputs are reported Unknown without deepening.
NormComparison norm_difference_sign(const ConstructionTable& table, const SparseVec& x,
                                    const SparseVec& y,
                                    std::int64_t start_bits = kDefaultPrecisionBits,
                                    std::int64_t precision_cap = kDefaultPrecisionCap);

} // namespace proxinorm
