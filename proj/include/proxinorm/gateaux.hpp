#pragma once

#include "proxinorm/construction.hpp"
#include "proxinorm/norm.hpp"
#include "proxinorm/rational.hpp"
#include "proxinorm/sparse_vec.hpp"

#include <cstdint>
#include <string_view>

namespace proxinorm {

enum class SignStatus { Positive, Negative, StraddlesZero };

std::string_view to_string(SignStatus status);
SignStatus parse_sign_status(std::string_view text);

struct DerivativeEnclosure {
  Rational lo;
  Rational hi;
  std::int64_t depth = 1;
  SignStatus sign = SignStatus::StraddlesZero;

  Rational width() const { return hi - lo; }
  Rational midpoint() const { return (lo + hi) / 2; }
  bool contains(const Rational& value) const { return lo <= value && value <= hi; }
  friend bool operator==(const DerivativeEnclosure&, const DerivativeEnclosure&) = default;
};

SignStatus classify(const Rational& lo, const Rational& hi);

/// One-sided derivative of the sup norm at x in direction u.
///
/// For x = 0 this is ||u||_0. Otherwise, over the maximisers
/// M = {n : |x_n| = ||x||_0}, split E+ = {n in M : u_n x_n > 0} and
/// E- = M \ E+; the result is max |u_n| over E+ when E+ is nonempty and
/// -min |u_n| over E- otherwise.
Rational d_plus_sup(const SparseVec& x, const SparseVec& u);

/// d+ |phi(.)| at x in direction u: |phi(u)| sigma(phi(u) phi(x)).
Rational d_plus_abs_functional(const SparseVec& phi, const SparseVec& x, const SparseVec& u);

/// Closed-form d+ ||x; u|| truncated at `depth`, with two-sided tail radius
/// ||u||_0 tail_bound(depth). Every retained term is exact.
DerivativeEnclosure d_plus_read_norm_at_depth(const ConstructionTable& table, const SparseVec& x,
                                              const SparseVec& u, std::int64_t depth);

/// Certified d+ ||x; u|| of width < 2^-precision_bits at the least depth.
DerivativeEnclosure d_plus_read_norm(const ConstructionTable& table, const SparseVec& x,
                                     const SparseVec& u,
                                     std::int64_t precision_bits = kDefaultPrecisionBits,
                                     std::int64_t precision_cap = kDefaultPrecisionCap);

/// d- ||x; u|| = -d+ ||x; -u||.
DerivativeEnclosure d_minus_read_norm(const ConstructionTable& table, const SparseVec& x,
                                      const SparseVec& u,
                                      std::int64_t precision_bits = kDefaultPrecisionBits,
                                      std::int64_t precision_cap = kDefaultPrecisionCap);

DerivativeEnclosure d_minus_read_norm_at_depth(const ConstructionTable& table, const SparseVec& x,
                                               const SparseVec& u, std::int64_t depth);

/// Lipschitz constant of the k-th summand of the norm: 1 for k = 0 (the
/// sup norm), 2^(-a_k^2) ||u_k - e_{a_k}||_1 otherwise.
Rational lipschitz_bound(const ConstructionTable& table, std::int64_t k);

} // namespace proxinorm
