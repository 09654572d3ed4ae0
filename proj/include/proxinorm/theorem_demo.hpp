#pragma once

#include "proxinorm/approx_linearity.hpp"
#include "proxinorm/construction.hpp"
#include "proxinorm/rational.hpp"
#include "proxinorm/sparse_vec.hpp"

#include "json.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

namespace proxinorm {

/// Closed rational interval. Trigonometric values enter the library only
/// through these, with endpoints obtained by directed rounding.
struct RationalInterval {
  Rational lo;
  Rational hi;

  Rational width() const { return hi - lo; }
  Rational midpoint() const { return (lo + hi) / 2; }
  /// +1 or -1 when the interval excludes zero.
  std::optional<int> sign() const;

  friend RationalInterval operator+(const RationalInterval& a, const RationalInterval& b);
  friend RationalInterval operator-(const RationalInterval& a, const RationalInterval& b);
  friend RationalInterval operator*(const Rational& s, const RationalInterval& a);
};

inline constexpr long kDefaultTrigBits = 128;

/// Certified enclosures of pi * numerator / denominator and of its sine and
/// cosine, for angles in [0, pi/2].
struct TrigAngle {
  RationalInterval angle;
  RationalInterval sin;
  RationalInterval cos;
};

TrigAngle trig_angle(std::int64_t numerator, std::int64_t denominator, long precision_bits = kDefaultTrigBits);

/// beta_r = r pi / (2N + 2), 0 <= r <= N + 1.
TrigAngle beta(int codimension, int r, long precision_bits = kDefaultTrigBits);
/// zeta_r = (beta_r + beta_{r-1}) / 2, 1 <= r <= N + 1.
TrigAngle zeta(int codimension, int r, long precision_bits = kDefaultTrigBits);

/// psi_r = sin(zeta_r) phi1 - cos(zeta_r) phi2.
struct PsiFunctional {
  int r;
  TrigAngle zeta;
  SparseVec phi1;
  SparseVec phi2;

  RationalInterval pair_with(const SparseVec& x) const;
  /// Coefficients rounded to multiples of 2^-denominator_bits.
  SparseVec round(std::int64_t denominator_bits) const;
};

std::vector<PsiFunctional> build_psi(int codimension, const SparseVec& phi1, const SparseVec& phi2,
                                     long precision_bits = kDefaultTrigBits);

/// Rows y_r = (-1 x r, +1 x (N + 1 - r)), r = 1..N+1.
struct SignMatrix {
  int codimension = 0;
  std::vector<std::vector<int>> rows;

  static SignMatrix predicted(int codimension);
};

struct IndependenceResult {
  bool independent = false;
  Integer determinant;
};

/// Exact determinant by fraction-free elimination.
IndependenceResult independence_check(const SignMatrix& matrix);

/// Rational points with <x, phi1> ~ cos(beta_r), <x, phi2> ~ sin(beta_r),
/// each within 2^-32 of the targets, for r = 1..N+1.
std::vector<SparseVec> coset_points(int codimension, const SparseVec& phi1, const SparseVec& phi2,
                                    long precision_bits = kDefaultTrigBits);

/// Entry (r, s) is the certified sign of <x^(r), psi_s>; nullopt while the
/// enclosure straddles zero.
using SignTable = std::vector<std::vector<std::optional<int>>>;

/// Signs against the interval-valued psi, escalating trig precision up to
/// `precision_cap` bits. Throws BudgetError if an entry stays undetermined.
SignTable sign_table(const std::vector<SparseVec>& points, int codimension, const SparseVec& phi1,
                     const SparseVec& phi2, long start_bits = kDefaultTrigBits, long precision_cap = 4096);

/// Exact signs against rational functionals (0 pairings stay undetermined).
SignTable sign_table(const std::vector<SparseVec>& points, const std::vector<SparseVec>& functionals);

/// Every entry certified and equal to the matrix entry.
bool matches(const SignTable& table, const SignMatrix& matrix);

/// (theta_0 phi)_i = 2^(a_k^2) phi_i for i = a_k in `prefix`, which must lie
/// in the report's A-prefix.
std::map<Index, Rational> theta_prefix(const ConstructionTable& table, const ApproxLinearityReport& report,
                                       const SparseVec& phi, const std::vector<Index>& prefix);

/// Roundings of psi_1..psi_{N+1} whose vectors all occur in the table prefix
/// k <= prefix_depth: the denominator bound starts at 2^denominator_bits and
/// halves until every rounding is reachable. Duplicates and zero vectors are
/// dropped.
std::vector<SparseVec> reachable_z_list(const ConstructionTable& table, const std::vector<PsiFunctional>& psi,
                                        std::int64_t denominator_bits, std::int64_t prefix_depth);

struct DemoOptions {
  int codimension = 2;
  std::int64_t rounding_denominator_bits = 16;
  std::int64_t prefix_depth = 500;
  long trig_bits = kDefaultTrigBits;
};

/// The walkthrough with phi1 = e_1*, phi2 = e_2*: angles, psi sign table,
/// rounded-z sign table, determinant, theta traces and the feasibility probe.
nlohmann::json run_demo(const ConstructionTable& table, const DemoOptions& options);

} // namespace proxinorm
