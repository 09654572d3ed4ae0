#include "proxinorm/gateaux.hpp"

#include "proxinorm/errors.hpp"

#include <optional>
#include <string>

namespace proxinorm {

std::string_view to_string(SignStatus status) {
  switch (status) {
  case SignStatus::Positive:
    return "positive";
  case SignStatus::Negative:
    return "negative";
  case SignStatus::StraddlesZero:
    break;
  }
  return "straddles_zero";
}

SignStatus parse_sign_status(std::string_view text) {
  if (text == "positive") {
    return SignStatus::Positive;
  }
  if (text == "negative") {
    return SignStatus::Negative;
  }
  if (text == "straddles_zero") {
    return SignStatus::StraddlesZero;
  }
  throw InputError("unknown sign status \"" + std::string(text) + "\"");
}

SignStatus classify(const Rational& lo, const Rational& hi) {
  if (sgn(lo) > 0) {
    return SignStatus::Positive;
  }
  if (sgn(hi) < 0) {
    return SignStatus::Negative;
  }
  return SignStatus::StraddlesZero;
}

Rational d_plus_sup(const SparseVec& x, const SparseVec& u) {
  if (x.is_zero()) {
    return sup_norm(u);
  }
  const Rational top = sup_norm(x);
  std::optional<Rational> rising;  // max |u_n| over E+
  std::optional<Rational> falling; // min |u_n| over E-
  for (const auto& [n, value] : x) {
    if (abs(value) != top) {
      continue;
    }
    const Rational un = u[n];
    const Rational magnitude = abs(un);
    if (sgn(un * value) > 0) {
      if (!rising || magnitude > *rising) {
        rising = magnitude;
      }
    } else if (!falling || magnitude < *falling) {
      falling = magnitude;
    }
  }
  return rising ? *rising : Rational(-*falling);
}

Rational d_plus_abs_functional(const SparseVec& phi, const SparseVec& x, const SparseVec& u) {
  const Rational pu = pair(u, phi);
  return abs(pu) * sigma(pu * pair(x, phi));
}

DerivativeEnclosure d_plus_read_norm_at_depth(const ConstructionTable& table, const SparseVec& x,
                                              const SparseVec& u, std::int64_t depth) {
  if (depth < 1) {
    throw PreconditionError("truncation depth must be positive");
  }
  DerivativeEnclosure out;
  out.depth = depth;
  if (u.is_zero()) {
    out.lo = 0;
    out.hi = 0;
    out.sign = SignStatus::StraddlesZero;
    return out;
  }
  table.ensure(depth);
  DyadicSum series;
  for (std::int64_t k = 1; k <= depth; ++k) {
    const TableEntry& e = table.entry(k);
    const Rational pu = pair(u, e.u) - u[e.a];
    if (sgn(pu) == 0) {
      continue;
    }
    const Rational px = pair(x, e.u) - x[e.a];
    series.add(sigma(pu * px) * abs(pu), e.a * e.a);
  }
  const Rational centre = d_plus_sup(x, u) + series.value();
  const Rational radius = sup_norm(u) * table.tail_bound(depth);
  out.lo = centre - radius;
  out.hi = centre + radius;
  out.sign = classify(out.lo, out.hi);
  return out;
}

DerivativeEnclosure d_plus_read_norm(const ConstructionTable& table, const SparseVec& x, const SparseVec& u,
                                     std::int64_t precision_bits, std::int64_t precision_cap) {
  if (precision_bits < 1 || precision_bits > precision_cap) {
    throw BudgetError("precision " + std::to_string(precision_bits) + " bits outside [1, " +
                      std::to_string(precision_cap) + "]");
  }
  if (u.is_zero()) {
    return d_plus_read_norm_at_depth(table, x, u, 1);
  }
  const std::int64_t depth = table.depth_for(2 * sup_norm(u), precision_bits);
  return d_plus_read_norm_at_depth(table, x, u, depth);
}

namespace {

DerivativeEnclosure reflect(const DerivativeEnclosure& d) {
  DerivativeEnclosure out;
  out.lo = -d.hi;
  out.hi = -d.lo;
  out.depth = d.depth;
  out.sign = classify(out.lo, out.hi);
  return out;
}

} // namespace

DerivativeEnclosure d_minus_read_norm(const ConstructionTable& table, const SparseVec& x, const SparseVec& u,
                                      std::int64_t precision_bits, std::int64_t precision_cap) {
  return reflect(d_plus_read_norm(table, x, -u, precision_bits, precision_cap));
}

DerivativeEnclosure d_minus_read_norm_at_depth(const ConstructionTable& table, const SparseVec& x,
                                               const SparseVec& u, std::int64_t depth) {
  return reflect(d_plus_read_norm_at_depth(table, x, -u, depth));
}

Rational lipschitz_bound(const ConstructionTable& table, std::int64_t k) {
  if (k < 0) {
    throw PreconditionError("lipschitz_bound requires k >= 0");
  }
  if (k == 0) {
    return 1;
  }
  const TableEntry& e = table.entry(k);
  return (1 + l1_norm(e.u)) * pow2(-e.a * e.a);
}

} // namespace proxinorm
