#include "proxinorm/linear_algebra.hpp"

#include "proxinorm/errors.hpp"

#include <algorithm>
#include <set>
#include <string>

namespace proxinorm {

namespace {

using Matrix = std::vector<std::vector<Rational>>;

// In-place reduced row echelon form; returns the pivot column of each
// nonzero row.
std::vector<std::size_t> reduce(Matrix& m, std::size_t columns) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < columns && row < m.size(); ++col) {
    std::size_t pick = row;
    while (pick < m.size() && sgn(m[pick][col]) == 0) {
      ++pick;
    }
    if (pick == m.size()) {
      continue;
    }
    std::swap(m[row], m[pick]);
    const Rational lead = m[row][col];
    for (auto& entry : m[row]) {
      entry /= lead;
    }
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r == row || sgn(m[r][col]) == 0) {
        continue;
      }
      const Rational factor = m[r][col];
      for (std::size_t c = col; c < columns; ++c) {
        m[r][c] -= factor * m[row][c];
      }
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

std::vector<Index> sorted_unique(std::vector<Index> indices) {
  std::sort(indices.begin(), indices.end());
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
  return indices;
}

Matrix dense_rows(const std::vector<SparseVec>& rows, const std::vector<Index>& columns) {
  Matrix m(rows.size(), std::vector<Rational>(columns.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      m[r][c] = rows[r][columns[c]];
    }
  }
  return m;
}

// a . x <= b over a fixed variable ordering.
struct Row {
  std::vector<Rational> a;
  Rational b;

  bool operator<(const Row& other) const {
    if (a != other.a) {
      return a < other.a;
    }
    return b < other.b;
  }
};

// Scales so the first nonzero coefficient has magnitude one; keeps the
// direction of the inequality.
Row normalised(Row row) {
  const auto lead = std::find_if(row.a.begin(), row.a.end(), [](const Rational& q) { return sgn(q) != 0; });
  if (lead != row.a.end()) {
    const Rational scale = abs(*lead);
    for (auto& q : row.a) {
      q /= scale;
    }
    row.b /= scale;
  }
  return row;
}

bool all_zero(const std::vector<Rational>& a) {
  return std::all_of(a.begin(), a.end(), [](const Rational& q) { return sgn(q) == 0; });
}

} // namespace

std::vector<SparseVec> kernel_directions(const std::vector<SparseVec>& constraints,
                                         const std::vector<Index>& allowed_support) {
  const std::vector<Index> columns = sorted_unique(allowed_support);
  Matrix m = dense_rows(constraints, columns);
  const std::vector<std::size_t> pivots = reduce(m, columns.size());

  std::vector<SparseVec> basis;
  std::size_t next_pivot = 0;
  for (std::size_t col = 0; col < columns.size(); ++col) {
    if (next_pivot < pivots.size() && pivots[next_pivot] == col) {
      ++next_pivot;
      continue;
    }
    SparseVec v;
    v.set(columns[col], 1);
    for (std::size_t r = 0; r < pivots.size(); ++r) {
      v.set(columns[pivots[r]], -m[r][col]);
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

std::size_t rank(const std::vector<SparseVec>& rows) {
  std::vector<Index> columns;
  for (const auto& row : rows) {
    for (const auto& [i, value] : row) {
      columns.push_back(i);
    }
  }
  columns = sorted_unique(std::move(columns));
  Matrix m = dense_rows(rows, columns);
  return reduce(m, columns.size()).size();
}

void LinearSystem::add(SparseVec coefficients, Relation relation, Rational rhs) {
  for (const auto& [i, value] : coefficients) {
    if (std::find(variables.begin(), variables.end(), i) == variables.end()) {
      variables.push_back(i);
    }
  }
  constraints.push_back({std::move(coefficients), relation, std::move(rhs)});
}

bool satisfies(const LinearSystem& system, const SparseVec& assignment) {
  for (const auto& c : system.constraints) {
    const Rational lhs = pair(c.coefficients, assignment);
    if (c.relation == Relation::Equal ? lhs != c.rhs : lhs > c.rhs) {
      return false;
    }
  }
  return true;
}

FeasibilityResult feasible(const LinearSystem& system, std::size_t elimination_budget) {
  std::vector<Index> vars = sorted_unique(system.variables);
  for (const auto& c : system.constraints) {
    for (const auto& [i, value] : c.coefficients) {
      if (!std::binary_search(vars.begin(), vars.end(), i)) {
        throw PreconditionError("constraint mentions undeclared variable " + std::to_string(i));
      }
    }
  }
  const std::size_t n = vars.size();

  std::set<Row> current;
  auto insert = [&](Row row) -> bool {
    if (all_zero(row.a)) {
      return sgn(row.b) >= 0;
    }
    current.insert(normalised(std::move(row)));
    return true;
  };

  for (const auto& c : system.constraints) {
    Row row{std::vector<Rational>(n), c.rhs};
    for (std::size_t v = 0; v < n; ++v) {
      row.a[v] = c.coefficients[vars[v]];
    }
    if (c.relation == Relation::Equal) {
      Row negated = row;
      for (auto& q : negated.a) {
        q = -q;
      }
      negated.b = -negated.b;
      if (!insert(std::move(negated))) {
        return {};
      }
    }
    if (!insert(std::move(row))) {
      return {};
    }
  }

  // stages[t] holds the system before variable n-1-t is eliminated.
  std::vector<std::vector<Row>> stages;
  for (std::size_t step = 0; step < n; ++step) {
    const std::size_t var = n - 1 - step;
    stages.emplace_back(current.begin(), current.end());
    std::vector<Row> upper;
    std::vector<Row> lower;
    std::set<Row> next;
    for (const Row& row : stages.back()) {
      const int s = sgn(row.a[var]);
      if (s > 0) {
        upper.push_back(row);
      } else if (s < 0) {
        lower.push_back(row);
      } else {
        next.insert(row);
      }
    }
    if (upper.size() * lower.size() + next.size() > elimination_budget) {
      throw BudgetError("Fourier-Motzkin elimination exceeded " + std::to_string(elimination_budget) + " rows");
    }
    current = std::move(next);
    for (const Row& up : upper) {
      for (const Row& lo : lower) {
        const Rational wu = -lo.a[var];
        const Rational wl = up.a[var];
        Row combined{std::vector<Rational>(n), wu * up.b + wl * lo.b};
        for (std::size_t v = 0; v < n; ++v) {
          combined.a[v] = wu * up.a[v] + wl * lo.a[v];
        }
        combined.a[var] = 0;
        if (!insert(std::move(combined))) {
          return {};
        }
      }
    }
  }
  // Only constant rows remain and insert() already rejected false ones.

  std::vector<Rational> value(n);
  for (std::size_t var = 0; var < n; ++var) {
    const std::vector<Row>& stage = stages[n - 1 - var];
    std::optional<Rational> lo;
    std::optional<Rational> hi;
    for (const Row& row : stage) {
      const int s = sgn(row.a[var]);
      if (s == 0) {
        continue;
      }
      Rational rest = row.b;
      for (std::size_t other = 0; other < var; ++other) {
        rest -= row.a[other] * value[other];
      }
      const Rational bound = rest / row.a[var];
      if (s > 0) {
        if (!hi || bound < *hi) {
          hi = bound;
        }
      } else if (!lo || bound > *lo) {
        lo = bound;
      }
    }
    if ((!lo || sgn(*lo) <= 0) && (!hi || sgn(*hi) >= 0)) {
      value[var] = 0;
    } else if (lo && sgn(*lo) > 0) {
      value[var] = *lo;
    } else {
      value[var] = *hi;
    }
  }

  SparseVec witness;
  for (std::size_t v = 0; v < n; ++v) {
    witness.set(vars[v], value[v]);
  }
  return {true, witness};
}

} // namespace proxinorm
