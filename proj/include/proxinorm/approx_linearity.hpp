#pragma once

#include "proxinorm/construction.hpp"
#include "proxinorm/linear_algebra.hpp"
#include "proxinorm/norm.hpp"
#include "proxinorm/rational.hpp"
#include "proxinorm/sparse_vec.hpp"

#include <cstdint>
#include <map>
#include <string_view>
#include <vector>

namespace proxinorm {

/// Why an index of the A-prefix was dropped from A0.
enum class Exclusion {
  MaxSet,   // |x_i| = ||x||_0
  ZSupport, // i lies in the support of some z_j
  FSet,     // |x_i| >= |<x, z_j>| for the z_j owning i
};

std::string_view to_string(Exclusion reason);
Exclusion parse_exclusion(std::string_view text);

/// Which z_j an index i = a_k of the A-prefix belongs to.
struct BlockOwner {
  std::int64_t k;
  std::size_t j; // 0-based into z_list
};

struct LinearityTrial {
  SparseVec v;
  Enclosure lhs;
  Rational rhs;
  bool pass = false;
};

struct ApproxLinearityReport {
  SparseVec x;
  std::vector<SparseVec> z_list;
  std::int64_t prefix_depth = 0;

  std::vector<Index> a_prefix;
  std::map<Index, BlockOwner> owners;
  std::map<Index, std::vector<Exclusion>> excluded;
  std::vector<Index> a0_prefix;

  std::map<Index, Rational> gamma;
  /// Certified bounds on eps_i = 2^(a_k^2) sum_{l > k} 2^(-a_l^2).
  std::map<Index, Rational> eps_lower;
  std::map<Index, Rational> eps_upper;

  /// True when every index that could ever be excluded lies inside the
  /// prefix, so A0 continues as all of A beyond it.
  bool cofinite_beyond_prefix = false;

  std::vector<LinearityTrial> trials;

  SparseVec gamma_functional() const;
  bool in_a0(Index i) const;
};

inline constexpr std::int64_t kEpsilonExactTerms = 50;

/// 2^(a_k^2) sum_{k < l <= k + terms} 2^(-a_l^2), exact.
Rational epsilon_lower(const ConstructionTable& table, std::int64_t k,
                       std::int64_t terms = kEpsilonExactTerms);
/// epsilon_lower plus a geometric majorant of the remaining tail.
Rational epsilon_upper(const ConstructionTable& table, std::int64_t k,
                       std::int64_t terms = kEpsilonExactTerms);

/// Builds A, A0, gamma and the error sequence over the table prefix k <= M.
/// Throws HypothesisError when some <x, z_j> = 0 and PreconditionError when
/// the z_j are not pairwise distinct.
ApproxLinearityReport build_report(const ConstructionTable& table, const SparseVec& x,
                                   const std::vector<SparseVec>& z_list, std::int64_t prefix_depth);

struct LinearityCheck {
  Enclosure lhs;
  Rational rhs;
  bool pass = false;
};

/// |d+ ||x; v|| - <v, gamma>| <= sum_i eps_i |v_i gamma_i| with the certified
/// lower bound for eps, so `pass` is a rigorous verification. The derivative
/// precision is raised until its width is below the right-hand side.
LinearityCheck verify_7_1(const ConstructionTable& table, const ApproxLinearityReport& report,
                          const SparseVec& v, std::int64_t precision_bits = kDefaultPrecisionBits,
                          std::int64_t precision_cap = kDefaultPrecisionCap);

/// |<v, gamma>| - sum_i eps_upper_i |v_i gamma_i|.
Rational coherence_margin(const ApproxLinearityReport& report, const SparseVec& v);

/// coherence_margin > 0: both one-sided derivatives along v then share the
/// sign of <v, gamma>.
bool sign_coherence(const ApproxLinearityReport& report, const SparseVec& v);

/// Searches phi = sum_j c_j Phi_j with |phi_i - gamma_i| <= eps_i |gamma_i|
/// for every i in `prefix` (eps taken at its certified lower bound). The
/// witness assigns c_j to variable j (1-based).
FeasibilityResult lemma10_feasibility(const ApproxLinearityReport& report,
                                      const std::vector<SparseVec>& phi,
                                      const std::vector<Index>& prefix,
                                      std::size_t elimination_budget = 20000);

/// Throws PreconditionError unless supp v lies in the A0-prefix.
void require_on_a0(const ApproxLinearityReport& report, const SparseVec& v);

} // namespace proxinorm
