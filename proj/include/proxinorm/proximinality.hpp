#pragma once

#include "proxinorm/approx_linearity.hpp"
#include "proxinorm/construction.hpp"
#include "proxinorm/gateaux.hpp"
#include "proxinorm/norm.hpp"
#include "proxinorm/sparse_vec.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace proxinorm {

/// H = intersection of ker(phi_i) for linearly independent, finitely
/// supported functionals.
class Subspace {
public:
  /// Throws PreconditionError if the functionals are dependent or zero.
  explicit Subspace(std::vector<SparseVec> functionals);

  const std::vector<SparseVec>& functionals() const { return functionals_; }
  std::size_t codimension() const { return functionals_.size(); }
  bool contains(const SparseVec& v) const;
  /// (<x, phi_1>, ..., <x, phi_N>), the coordinates of the coset x + H.
  std::vector<Rational> coset_values(const SparseVec& x) const;

private:
  std::vector<SparseVec> functionals_;
};

struct SearchParams {
  std::int64_t prefix_depth = 500;
  std::int64_t rounding_denominator_bits = 16;
  std::size_t max_candidates = 5000;
  std::int64_t precision_bits = kDefaultPrecisionBits;
  std::int64_t precision_cap = kDefaultPrecisionCap;
  int max_halvings = 64;
  bool parallel = true;
};

struct SignEvidence {
  DerivativeEnclosure d_plus;
  DerivativeEnclosure d_minus;
};

struct DescentDirection {
  SparseVec v;
  Rational margin;
  std::vector<SparseVec> z_list;
  SignEvidence evidence;
};

/// Kernel directions of H supported on subsets S of the A0-prefix with
/// |S| = codim + 1, each scored by its coherence margin.
struct Candidate {
  std::vector<Index> support;
  SparseVec v;
  Rational margin;
};

/// All candidate supports in search order: increasing maximal index, then
/// lexicographic. At most `limit` supports.
std::vector<std::vector<Index>> candidate_supports(const std::vector<Index>& a0_prefix, std::size_t size,
                                                   std::size_t limit);

/// z-list for x: roundings of the psi_r built from the first two
/// functionals (or of phi_1 alone at codimension 1), coarsened until they
/// occur in the table prefix and pair nontrivially with x.
std::vector<SparseVec> choose_z_list(const ConstructionTable& table, const Subspace& h, const SparseVec& x,
                                     const SearchParams& params);

/// Looks for v in H whose one-sided derivatives at x are nonzero and share a
/// sign. Throws PreconditionError if x lies in H. nullopt means only that the
/// search budget ran out.
std::optional<DescentDirection> find_descent_direction(const ConstructionTable& table, const Subspace& h,
                                                       const SparseVec& x, const SearchParams& params = {});

struct DescentCertificate {
  std::vector<SparseVec> functionals;
  std::vector<Rational> coset;
  SparseVec x;
  SparseVec v;
  Rational h;
  /// x + h v, stored so that x, v and h are bound to each other.
  SparseVec x_next;
  Enclosure norm_before;
  Enclosure norm_after;
  DerivativeEnclosure d_plus;
  DerivativeEnclosure d_minus;

};

/// Dyadic line search for h of sign opposite to the shared derivative sign,
/// halving until ||x + h v|| < ||x|| is certified.
DescentCertificate certify_descent(const ConstructionTable& table, const Subspace& h, const SparseVec& x,
                                   const SparseVec& v, const SignEvidence& evidence,
                                   const SearchParams& params = {});

/// Iterates search and certification from x0; stops early, returning the
/// partial chain, when a search or certification budget trips.
std::vector<DescentCertificate> minimizing_sequence(const ConstructionTable& table, const Subspace& h,
                                                    const SparseVec& x0, int steps,
                                                    const SearchParams& params = {});

struct VerificationResult {
  bool ok = true;
  std::vector<std::string> failures;
};

/// Recomputes every enclosure of the certificate at its recorded depth and
/// checks x_next = x + h v, membership, coset coordinates, shared sign and
/// strict decrease.
VerificationResult verify_certificate(const ConstructionTable& table, const DescentCertificate& cert);

/// Also checks that consecutive certificates chain: x of each is x_next of
/// the one before.
VerificationResult verify_chain(const ConstructionTable& table, const std::vector<DescentCertificate>& chain);

} // namespace proxinorm
