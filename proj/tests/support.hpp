#pragma once

// Generators and independent oracles shared by the unit and acceptance
// tests. Oracles deliberately avoid the library's own shortcuts (dyadic
// accumulation, elimination, majorants) so agreement means something.

#include "proxinorm/construction.hpp"
#include "proxinorm/linear_algebra.hpp"
#include "proxinorm/rational.hpp"
#include "proxinorm/sparse_vec.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

namespace testing_support {

using proxinorm::Index;
using proxinorm::Integer;
using proxinorm::Rational;
using proxinorm::SparseVec;

class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::int64_t uniform(std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(engine_);
  }

  bool coin() { return uniform(0, 1) == 1; }

  /// Nonzero p/q with |p| <= max_num, 1 <= q <= max_den.
  Rational nonzero_rational(std::int64_t max_num, std::int64_t max_den) {
    const std::int64_t p = uniform(1, max_num) * (coin() ? 1 : -1);
    return proxinorm::ratio(p, uniform(1, max_den));
  }

  /// Exactly `count` distinct indices in [1, max_index].
  std::vector<Index> indices(std::size_t count, Index max_index) {
    std::vector<Index> out;
    while (out.size() < count) {
      const Index i = uniform(1, max_index);
      if (std::find(out.begin(), out.end(), i) == out.end()) {
        out.push_back(i);
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  SparseVec sparse(std::size_t nnz, Index max_index, std::int64_t max_num, std::int64_t max_den) {
    SparseVec out;
    for (const Index i : indices(nnz, max_index)) {
      out.set(i, nonzero_rational(max_num, max_den));
    }
    return out;
  }

  template <class T>
  const T& pick(const std::vector<T>& items) {
    return items[static_cast<std::size_t>(uniform(0, static_cast<std::int64_t>(items.size()) - 1))];
  }

private:
  std::mt19937_64 engine_;
};

/// 2^-n via integer exponentiation, independent of the library's shift-based pow2.
inline Rational half_power(std::int64_t n) {
  Integer den;
  mpz_ui_pow_ui(den.get_mpz_t(), 2, static_cast<unsigned long>(n));
  return Rational(Integer(1), den);
}

inline Rational abs_q(const Rational& q) { return q < 0 ? Rational(-q) : q; }

inline Rational sup_oracle(const SparseVec& x) {
  Rational best = 0;
  for (const auto& [i, v] : x) {
    best = std::max(best, abs_q(v));
  }
  return best;
}

/// ||x||_0 + sum_{k <= depth} 2^(-a_k^2) |<x, u_k - e_{a_k}>|, term by term.
inline Rational norm_partial_oracle(const proxinorm::ConstructionTable& table, const SparseVec& x,
                                    std::int64_t depth) {
  Rational total = sup_oracle(x);
  for (std::int64_t k = 1; k <= depth; ++k) {
    const auto& e = table.entry(k);
    Rational pairing = 0;
    for (const auto& [i, v] : e.u) {
      pairing += v * x[i];
    }
    pairing -= x[e.a];
    if (pairing != 0) {
      total += abs_q(pairing) * half_power(e.a * e.a);
    }
  }
  return total;
}

/// sum_{K < k <= K + terms} (1 + a_k) 2^(-a_k^2).
inline Rational tail_partial_oracle(const proxinorm::ConstructionTable& table, std::int64_t K, std::int64_t terms) {
  Rational total = 0;
  for (std::int64_t k = K + 1; k <= K + terms; ++k) {
    const std::int64_t a = table.a(k);
    total += Rational(1 + a) * half_power(a * a);
  }
  return total;
}

/// Determinant by cofactor expansion along the first row.
inline Rational cofactor_det(const std::vector<std::vector<Rational>>& m) {
  const std::size_t n = m.size();
  if (n == 0) {
    return 1;
  }
  if (n == 1) {
    return m[0][0];
  }
  Rational total = 0;
  for (std::size_t c = 0; c < n; ++c) {
    if (m[0][c] == 0) {
      continue;
    }
    std::vector<std::vector<Rational>> minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<Rational> row;
      for (std::size_t cc = 0; cc < n; ++cc) {
        if (cc != c) {
          row.push_back(m[r][cc]);
        }
      }
      minor.push_back(std::move(row));
    }
    const Rational sign = (c % 2 == 0) ? 1 : -1;
    total += sign * m[0][c] * cofactor_det(minor);
  }
  return total;
}

/// Rank as the size of the largest nonvanishing minor, over the columns
/// `columns`. Exponential; keep inputs tiny.
inline std::size_t rank_by_minors(const std::vector<SparseVec>& rows, const std::vector<Index>& columns) {
  const std::size_t r = rows.size();
  const std::size_t c = columns.size();
  for (std::size_t size = std::min(r, c); size > 0; --size) {
    std::vector<bool> row_mask(r, false);
    std::fill(row_mask.begin(), row_mask.begin() + static_cast<std::ptrdiff_t>(size), true);
    do {
      std::vector<bool> col_mask(c, false);
      std::fill(col_mask.begin(), col_mask.begin() + static_cast<std::ptrdiff_t>(size), true);
      do {
        std::vector<std::vector<Rational>> m;
        for (std::size_t i = 0; i < r; ++i) {
          if (!row_mask[i]) {
            continue;
          }
          std::vector<Rational> row;
          for (std::size_t j = 0; j < c; ++j) {
            if (col_mask[j]) {
              row.push_back(rows[i][columns[j]]);
            }
          }
          m.push_back(std::move(row));
        }
        if (cofactor_det(m) != 0) {
          return size;
        }
      } while (std::prev_permutation(col_mask.begin(), col_mask.end()));
    } while (std::prev_permutation(row_mask.begin(), row_mask.end()));
  }
  return 0;
}

/// Solves a square system by Cramer's rule; nullopt when singular.
inline std::optional<std::vector<Rational>> cramer(const std::vector<std::vector<Rational>>& a,
                                                   const std::vector<Rational>& b) {
  const Rational det = cofactor_det(a);
  if (det == 0) {
    return std::nullopt;
  }
  std::vector<Rational> out;
  for (std::size_t j = 0; j < a.size(); ++j) {
    auto m = a;
    for (std::size_t i = 0; i < a.size(); ++i) {
      m[i][j] = b[i];
    }
    out.push_back(cofactor_det(m) / det);
  }
  return out;
}

/// Feasibility by vertex enumeration over the constraints plus the box
/// |x_j| <= bound: a nonempty bounded polyhedron has a vertex, and every
/// vertex solves some square subsystem of tight constraints.
inline bool vertex_feasible(const proxinorm::LinearSystem& system, const Rational& bound) {
  using proxinorm::Relation;
  const auto& vars = system.variables;
  const std::size_t n = vars.size();
  std::vector<std::vector<Rational>> rows;
  std::vector<Rational> rhs;
  std::vector<bool> equality;
  for (const auto& c : system.constraints) {
    std::vector<Rational> row;
    for (const Index v : vars) {
      row.push_back(c.coefficients[v]);
    }
    rows.push_back(row);
    rhs.push_back(c.rhs);
    equality.push_back(c.relation == Relation::Equal);
  }
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<Rational> up(n, Rational(0));
    up[j] = 1;
    rows.push_back(up);
    rhs.push_back(bound);
    equality.push_back(false);
    std::vector<Rational> down(n, Rational(0));
    down[j] = -1;
    rows.push_back(down);
    rhs.push_back(bound);
    equality.push_back(false);
  }
  const auto admissible = [&](const std::vector<Rational>& point) {
    for (std::size_t i = 0; i < rows.size(); ++i) {
      Rational lhs = 0;
      for (std::size_t j = 0; j < n; ++j) {
        lhs += rows[i][j] * point[j];
      }
      if (equality[i] ? lhs != rhs[i] : lhs > rhs[i]) {
        return false;
      }
    }
    return true;
  };
  if (n == 0) {
    return admissible({});
  }
  const std::size_t m = rows.size();
  std::vector<bool> mask(m, false);
  std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(n), true);
  do {
    std::vector<std::vector<Rational>> a;
    std::vector<Rational> b;
    for (std::size_t i = 0; i < m; ++i) {
      if (mask[i]) {
        a.push_back(rows[i]);
        b.push_back(rhs[i]);
      }
    }
    if (const auto point = cramer(a, b); point && admissible(*point)) {
      return true;
    }
  } while (std::prev_permutation(mask.begin(), mask.end()));
  return false;
}

} // namespace testing_support
