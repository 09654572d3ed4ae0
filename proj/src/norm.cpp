#include "proxinorm/norm.hpp"

#include "proxinorm/errors.hpp"

#include <algorithm>
#include <string>

namespace proxinorm {

bool intersects(const Enclosure& a, const Enclosure& b) { return a.lo <= b.hi && b.lo <= a.hi; }

Enclosure read_norm_at_depth(const ConstructionTable& table, const SparseVec& x, std::int64_t depth) {
  if (depth < 1) {
    throw PreconditionError("truncation depth must be positive");
  }
  if (x.is_zero()) {
    return {0, 0, depth};
  }
  table.ensure(depth);
  const Rational sup = sup_norm(x);
  DyadicSum series;
  for (std::int64_t k = 1; k <= depth; ++k) {
    const TableEntry& e = table.entry(k);
    const Rational term = abs(pair(x, e.u) - x[e.a]);
    series.add(term, e.a * e.a);
  }
  Enclosure out;
  out.lo = sup + series.value();
  out.hi = out.lo + sup * table.tail_bound(depth);
  out.depth = depth;
  return out;
}

Enclosure read_norm(const ConstructionTable& table, const SparseVec& x, std::int64_t precision_bits,
                    std::int64_t precision_cap) {
  if (precision_bits < 1 || precision_bits > precision_cap) {
    throw BudgetError("precision " + std::to_string(precision_bits) + " bits outside [1, " +
                      std::to_string(precision_cap) + "]");
  }
  if (x.is_zero()) {
    return {0, 0, 1};
  }
  return read_norm_at_depth(table, x, table.depth_for(sup_norm(x), precision_bits));
}

bool equivalence_check(const ConstructionTable& table, const SparseVec& x, std::int64_t precision_bits) {
  if (x.is_zero()) {
    throw PreconditionError("equivalence_check requires x != 0");
  }
  const Rational sup = sup_norm(x);
  const Enclosure e = read_norm(table, x, precision_bits);
  return e.lo >= sup && e.hi <= 3 * sup;
}

namespace {

Rational overlap(const Enclosure& a, const Enclosure& b) {
  const Rational width = std::min(a.hi, b.hi) - std::max(a.lo, b.lo);
  return sgn(width) > 0 ? width : Rational(0);
}

} // namespace

NormComparison norm_difference_sign(const ConstructionTable& table, const SparseVec& x, const SparseVec& y,
                                    std::int64_t start_bits, std::int64_t precision_cap) {
  NormComparison out;
  if (x == y) {
    out.first = read_norm(table, x, start_bits, precision_cap);
    out.second = out.first;
    out.residual_width = overlap(out.first, out.second);
    return out;
  }
  for (std::int64_t bits = start_bits; bits <= precision_cap; bits *= 2) {
    out.first = read_norm(table, x, bits, precision_cap);
    out.second = read_norm(table, y, bits, precision_cap);
    if (out.first.hi < out.second.lo) {
      out.order = Order::Less;
      return out;
    }
    if (out.second.hi < out.first.lo) {
      out.order = Order::Greater;
      return out;
    }
  }
  out.order = Order::Unknown;
  out.residual_width = overlap(out.first, out.second);
  return out;
}

} // namespace proxinorm
