#pragma once

#include "proxinorm/rational.hpp"
#include "proxinorm/sparse_vec.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace proxinorm {

/// Basis of {v : supp v within allowed_support, <v, phi> = 0 for every
/// phi in constraints}. Empty when only the zero vector qualifies.
std::vector<SparseVec> kernel_directions(const std::vector<SparseVec>& constraints,
                                         const std::vector<Index>& allowed_support);

/// Exact rank of the functionals viewed as rows.
std::size_t rank(const std::vector<SparseVec>& rows);

enum class Relation { Equal, LessEqual };

struct Constraint {
  SparseVec coefficients;
  Relation relation = Relation::LessEqual;
  Rational rhs;
};

/// Conjunction of linear constraints over the variables listed in
/// `variables` (indices into SparseVec coefficient vectors).
struct LinearSystem {
  std::vector<Constraint> constraints;
  std::vector<Index> variables;

  void add(SparseVec coefficients, Relation relation, Rational rhs);
};

struct FeasibilityResult {
  bool satisfiable = false;
  /// Exact assignment satisfying every constraint, when satisfiable.
  std::optional<SparseVec> witness;
};

/// Decides a system exactly by Fourier-Motzkin elimination and recovers a
/// witness by back substitution. Throws BudgetError when an intermediate
/// system grows beyond `elimination_budget` rows.
FeasibilityResult feasible(const LinearSystem& system, std::size_t elimination_budget = 20000);

/// True when `assignment` satisfies every constraint exactly.
bool satisfies(const LinearSystem& system, const SparseVec& assignment);

} // namespace proxinorm
