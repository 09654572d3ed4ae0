#include "proxinorm/theorem_demo.hpp"

#include "proxinorm/errors.hpp"
#include "proxinorm/json_io.hpp"
#include "proxinorm/linear_algebra.hpp"

#include <mpfr.h>

#include <algorithm>
#include <string>

namespace proxinorm {

namespace {

class Mpfr {
public:
  explicit Mpfr(long precision) { mpfr_init2(value_, precision); }
  ~Mpfr() { mpfr_clear(value_); }
  Mpfr(const Mpfr&) = delete;
  Mpfr& operator=(const Mpfr&) = delete;

  mpfr_ptr get() { return value_; }
  Rational exact() const {
    Rational out;
    mpfr_get_q(out.get_mpq_t(), value_);
    return out;
  }

private:
  mpfr_t value_;
};

RationalInterval point(const Rational& q) { return {q, q}; }

} // namespace

std::optional<int> RationalInterval::sign() const {
  if (sgn(lo) > 0) {
    return 1;
  }
  if (sgn(hi) < 0) {
    return -1;
  }
  return std::nullopt;
}

RationalInterval operator+(const RationalInterval& a, const RationalInterval& b) { return {a.lo + b.lo, a.hi + b.hi}; }

RationalInterval operator-(const RationalInterval& a, const RationalInterval& b) { return {a.lo - b.hi, a.hi - b.lo}; }

RationalInterval operator*(const Rational& s, const RationalInterval& a) {
  if (sgn(s) >= 0) {
    return {s * a.lo, s * a.hi};
  }
  return {s * a.hi, s * a.lo};
}

TrigAngle trig_angle(std::int64_t numerator, std::int64_t denominator, long precision_bits) {
  if (denominator <= 0 || numerator < 0 || 2 * numerator > denominator) {
    throw PreconditionError("trig_angle supports angles in [0, pi/2] only");
  }
  TrigAngle out;
  if (numerator == 0) {
    out.angle = point(0);
    out.sin = point(0);
    out.cos = point(1);
    return out;
  }
  Mpfr pi_lo(precision_bits), pi_hi(precision_bits);
  mpfr_const_pi(pi_lo.get(), MPFR_RNDD);
  mpfr_const_pi(pi_hi.get(), MPFR_RNDU);
  const Rational ratio(numerator, denominator);
  if (2 * numerator == denominator) {
    out.angle = {pi_lo.exact() * ratio, pi_hi.exact() * ratio};
    out.sin = point(1);
    out.cos = point(0);
    return out;
  }

  Mpfr lo(precision_bits), hi(precision_bits);
  mpfr_mul_si(lo.get(), pi_lo.get(), static_cast<long>(numerator), MPFR_RNDD);
  mpfr_div_si(lo.get(), lo.get(), static_cast<long>(denominator), MPFR_RNDD);
  mpfr_mul_si(hi.get(), pi_hi.get(), static_cast<long>(numerator), MPFR_RNDU);
  mpfr_div_si(hi.get(), hi.get(), static_cast<long>(denominator), MPFR_RNDU);
  out.angle = {lo.exact(), hi.exact()};
  if (out.angle.hi * 2 >= pi_lo.exact()) {
    throw BudgetError("trig precision too low to keep the angle below pi/2");
  }

  // sin increases and cos decreases on [0, pi/2].
  Mpfr s_lo(precision_bits), s_hi(precision_bits), c_lo(precision_bits), c_hi(precision_bits);
  mpfr_sin(s_lo.get(), lo.get(), MPFR_RNDD);
  mpfr_sin(s_hi.get(), hi.get(), MPFR_RNDU);
  mpfr_cos(c_lo.get(), hi.get(), MPFR_RNDD);
  mpfr_cos(c_hi.get(), lo.get(), MPFR_RNDU);
  out.sin = {s_lo.exact(), s_hi.exact()};
  out.cos = {c_lo.exact(), c_hi.exact()};
  return out;
}

TrigAngle beta(int codimension, int r, long precision_bits) {
  if (r < 0 || r > codimension + 1) {
    throw PreconditionError("beta_r needs 0 <= r <= N + 1");
  }
  return trig_angle(r, 2 * codimension + 2, precision_bits);
}

TrigAngle zeta(int codimension, int r, long precision_bits) {
  if (r < 1 || r > codimension + 1) {
    throw PreconditionError("zeta_r needs 1 <= r <= N + 1");
  }
  return trig_angle(2 * r - 1, 4 * codimension + 4, precision_bits);
}

RationalInterval PsiFunctional::pair_with(const SparseVec& x) const {
  return pair(x, phi1) * zeta.sin - pair(x, phi2) * zeta.cos;
}

SparseVec PsiFunctional::round(std::int64_t denominator_bits) const {
  const Rational s = round_to_dyadic(zeta.sin.midpoint(), denominator_bits);
  const Rational c = round_to_dyadic(zeta.cos.midpoint(), denominator_bits);
  return s * phi1 - c * phi2;
}

std::vector<PsiFunctional> build_psi(int codimension, const SparseVec& phi1, const SparseVec& phi2,
                                     long precision_bits) {
  if (codimension < 2) {
    throw PreconditionError("psi functionals need codimension N >= 2");
  }
  if (rank({phi1, phi2}) != 2) {
    throw PreconditionError("phi1 and phi2 must be linearly independent");
  }
  std::vector<PsiFunctional> out;
  for (int r = 1; r <= codimension + 1; ++r) {
    out.push_back({r, zeta(codimension, r, precision_bits), phi1, phi2});
  }
  return out;
}

SignMatrix SignMatrix::predicted(int codimension) {
  SignMatrix m;
  m.codimension = codimension;
  for (int r = 1; r <= codimension + 1; ++r) {
    std::vector<int> row(static_cast<std::size_t>(codimension + 1), 1);
    std::fill(row.begin(), row.begin() + r, -1);
    m.rows.push_back(std::move(row));
  }
  return m;
}

IndependenceResult independence_check(const SignMatrix& matrix) {
  const std::size_t n = matrix.rows.size();
  std::vector<std::vector<Integer>> m(n);
  for (std::size_t r = 0; r < n; ++r) {
    if (matrix.rows[r].size() != n) {
      throw PreconditionError("sign matrix must be square");
    }
    for (const int entry : matrix.rows[r]) {
      m[r].emplace_back(entry);
    }
  }
  // Bareiss fraction-free elimination.
  Integer previous = 1;
  int swaps = 0;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      std::size_t pick = k + 1;
      while (pick < n && m[pick][k] == 0) {
        ++pick;
      }
      if (pick == n) {
        return {false, 0};
      }
      std::swap(m[k], m[pick]);
      ++swaps;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / previous;
      }
    }
    previous = m[k][k];
  }
  Integer det = n == 0 ? Integer(1) : m[n - 1][n - 1];
  if (swaps % 2 != 0) {
    det = -det;
  }
  return {det != 0, det};
}

std::vector<SparseVec> coset_points(int codimension, const SparseVec& phi1, const SparseVec& phi2,
                                    long precision_bits) {
  std::vector<Index> indices = phi1.support();
  for (const Index i : phi2.support()) {
    indices.push_back(i);
  }
  std::sort(indices.begin(), indices.end());
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());

  for (std::size_t p = 0; p < indices.size(); ++p) {
    for (std::size_t q = p + 1; q < indices.size(); ++q) {
      const Index i = indices[p];
      const Index j = indices[q];
      const Rational det = phi1[i] * phi2[j] - phi1[j] * phi2[i];
      if (sgn(det) == 0) {
        continue;
      }
      std::vector<SparseVec> out;
      for (int r = 1; r <= codimension + 1; ++r) {
        const TrigAngle b = beta(codimension, r, precision_bits);
        const Rational c = round_to_dyadic(b.cos.midpoint(), 40);
        const Rational s = round_to_dyadic(b.sin.midpoint(), 40);
        SparseVec x;
        x.set(i, (c * phi2[j] - s * phi1[j]) / det);
        x.set(j, (s * phi1[i] - c * phi2[i]) / det);
        out.push_back(std::move(x));
      }
      return out;
    }
  }
  throw PreconditionError("phi1 and phi2 must be linearly independent");
}

SignTable sign_table(const std::vector<SparseVec>& points, int codimension, const SparseVec& phi1,
                     const SparseVec& phi2, long start_bits, long precision_cap) {
  for (long bits = start_bits; bits <= precision_cap; bits *= 2) {
    const std::vector<PsiFunctional> psi = build_psi(codimension, phi1, phi2, bits);
    SignTable table(points.size());
    bool complete = true;
    for (std::size_t r = 0; r < points.size(); ++r) {
      for (const auto& functional : psi) {
        table[r].push_back(functional.pair_with(points[r]).sign());
        complete = complete && table[r].back().has_value();
      }
    }
    if (complete) {
      return table;
    }
  }
  throw BudgetError("sign table undetermined at " + std::to_string(precision_cap) + " bits");
}

SignTable sign_table(const std::vector<SparseVec>& points, const std::vector<SparseVec>& functionals) {
  SignTable table(points.size());
  for (std::size_t r = 0; r < points.size(); ++r) {
    for (const auto& z : functionals) {
      const int s = sgn(pair(points[r], z));
      table[r].push_back(s == 0 ? std::nullopt : std::optional<int>(s));
    }
  }
  return table;
}

bool matches(const SignTable& table, const SignMatrix& matrix) {
  if (table.size() != matrix.rows.size()) {
    return false;
  }
  for (std::size_t r = 0; r < table.size(); ++r) {
    if (table[r].size() != matrix.rows[r].size()) {
      return false;
    }
    for (std::size_t s = 0; s < table[r].size(); ++s) {
      if (!table[r][s] || *table[r][s] != matrix.rows[r][s]) {
        return false;
      }
    }
  }
  return true;
}

std::map<Index, Rational> theta_prefix(const ConstructionTable& table, const ApproxLinearityReport& report,
                                       const SparseVec& phi, const std::vector<Index>& prefix) {
  std::map<Index, Rational> out;
  for (const Index i : prefix) {
    const auto it = report.owners.find(i);
    if (it == report.owners.end()) {
      throw PreconditionError("theta prefix index " + std::to_string(i) + " is not in the A-prefix");
    }
    const std::int64_t a = table.a(it->second.k);
    out[i] = pow2(a * a) * phi[i];
  }
  return out;
}

std::vector<SparseVec> reachable_z_list(const ConstructionTable& table, const std::vector<PsiFunctional>& psi,
                                        std::int64_t denominator_bits, std::int64_t prefix_depth) {
  for (std::int64_t bits = denominator_bits; bits >= 0; --bits) {
    std::vector<SparseVec> z_list;
    bool reachable = true;
    for (const auto& functional : psi) {
      SparseVec z = functional.round(bits);
      if (z.is_zero() || std::find(z_list.begin(), z_list.end(), z) != z_list.end()) {
        continue;
      }
      if (table.positions(z, prefix_depth).empty()) {
        reachable = false;
        break;
      }
      z_list.push_back(std::move(z));
    }
    if (reachable && !z_list.empty()) {
      return z_list;
    }
  }
  return {};
}

namespace {

json interval_json(const RationalInterval& i) {
  return {{"lo", to_string(i.lo)}, {"hi", to_string(i.hi)}, {"approx", i.midpoint().get_d()}};
}

json table_json(const SignTable& table) {
  json rows = json::array();
  for (const auto& row : table) {
    json out = json::array();
    for (const auto& entry : row) {
      out.push_back(entry ? json(*entry) : json("undetermined"));
    }
    rows.push_back(std::move(out));
  }
  return rows;
}

} // namespace

nlohmann::json run_demo(const ConstructionTable& table, const DemoOptions& options) {
  const int n = options.codimension;
  const SparseVec phi1 = SparseVec::unit(1);
  const SparseVec phi2 = SparseVec::unit(2);

  json report;
  report["codimension"] = n;
  report["phi"] = json::array({to_json(phi1), to_json(phi2)});

  json betas = json::array();
  for (int r = 0; r <= n + 1; ++r) {
    const TrigAngle b = beta(n, r, options.trig_bits);
    betas.push_back({{"r", r}, {"angle", interval_json(b.angle)}, {"cos", interval_json(b.cos)},
                     {"sin", interval_json(b.sin)}});
  }
  report["beta"] = std::move(betas);

  const std::vector<PsiFunctional> psi = build_psi(n, phi1, phi2, options.trig_bits);
  json zetas = json::array();
  for (const auto& f : psi) {
    zetas.push_back({{"r", f.r}, {"angle", interval_json(f.zeta.angle)}, {"sin", interval_json(f.zeta.sin)},
                     {"cos", interval_json(f.zeta.cos)}});
  }
  report["zeta"] = std::move(zetas);

  const std::vector<SparseVec> points = coset_points(n, phi1, phi2, options.trig_bits);
  json point_json = json::array();
  for (const auto& x : points) {
    point_json.push_back(to_json(x));
  }
  report["coset_points"] = std::move(point_json);

  const SignMatrix predicted = SignMatrix::predicted(n);
  const SignTable psi_signs = sign_table(points, n, phi1, phi2, options.trig_bits);
  report["sign_table_psi"] = table_json(psi_signs);
  report["sign_table_psi_matches"] = matches(psi_signs, predicted);

  std::vector<SparseVec> z_fine;
  for (const auto& f : psi) {
    z_fine.push_back(f.round(options.rounding_denominator_bits));
  }
  const SignTable z_signs = sign_table(points, z_fine);
  json z_json = json::array();
  for (const auto& z : z_fine) {
    z_json.push_back(to_json(z));
  }
  report["z_rounded"] = std::move(z_json);
  report["sign_table_z"] = table_json(z_signs);
  report["sign_table_z_matches"] = matches(z_signs, predicted);

  report["sign_matrix"] = predicted.rows;
  const IndependenceResult independence = independence_check(predicted);
  report["determinant"] = independence.determinant.get_str();
  report["independent"] = independence.independent;

  // Theta traces need z vectors that the table actually lists.
  const std::vector<SparseVec> z_reach =
      reachable_z_list(table, psi, options.rounding_denominator_bits, options.prefix_depth);
  json traces = json::array();
  for (std::size_t r = 0; r < points.size(); ++r) {
    std::vector<SparseVec> z_list;
    for (const auto& z : z_reach) {
      if (sgn(pair(points[r], z)) != 0) {
        z_list.push_back(z);
      }
    }
    json trace;
    trace["r"] = r + 1;
    if (z_list.empty()) {
      trace["skipped"] = "every reachable z pairs to zero with this point";
      traces.push_back(std::move(trace));
      continue;
    }
    const ApproxLinearityReport lin = build_report(table, points[r], z_list, options.prefix_depth);
    const SparseVec gamma = lin.gamma_functional();
    const auto theta = theta_prefix(table, lin, gamma, lin.a0_prefix);
    json blocks = json::array();
    bool constant = true;
    for (std::size_t j = 0; j < z_list.size(); ++j) {
      const int s = sigma(pair(points[r], z_list[j]));
      json values = json::object();
      for (const auto& [i, value] : theta) {
        if (lin.owners.at(i).j == j) {
          values[std::to_string(i)] = to_string(value);
          constant = constant && value == -s;
        }
      }
      blocks.push_back({{"z", to_json(z_list[j])}, {"sigma", s}, {"theta_gamma", std::move(values)}});
    }
    trace["a0_prefix"] = lin.a0_prefix;
    trace["blocks"] = std::move(blocks);
    trace["theta_gamma_constant"] = constant;

    const FeasibilityResult plain = lemma10_feasibility(lin, {phi1, phi2}, lin.a0_prefix);
    trace["lemma10_span_phi"] = {{"satisfiable", plain.satisfiable}};
    const FeasibilityResult with_gamma = lemma10_feasibility(lin, {phi1, phi2, gamma}, lin.a0_prefix);
    json probe = {{"satisfiable", with_gamma.satisfiable}};
    if (with_gamma.witness) {
      SparseVec witness_phi;
      const std::vector<SparseVec> span{phi1, phi2, gamma};
      for (std::size_t j = 0; j < span.size(); ++j) {
        witness_phi += (*with_gamma.witness)[static_cast<Index>(j + 1)] * span[j];
      }
      json values = json::object();
      bool within = true;
      for (const auto& [i, value] : theta_prefix(table, lin, witness_phi, lin.a0_prefix)) {
        values[std::to_string(i)] = to_string(value);
        const int s = sigma(pair(points[r], z_list[lin.owners.at(i).j]));
        within = within && abs(value + s) <= lin.eps_lower.at(i);
      }
      probe["coefficients"] = to_json(*with_gamma.witness);
      probe["theta_witness"] = std::move(values);
      probe["within_eps"] = within;
    }
    trace["lemma10_span_phi_gamma"] = std::move(probe);
    traces.push_back(std::move(trace));
  }
  json z_reach_json = json::array();
  for (const auto& z : z_reach) {
    z_reach_json.push_back(to_json(z));
  }
  report["theta"] = {{"z_list", std::move(z_reach_json)}, {"prefix_depth", options.prefix_depth},
                     {"traces", std::move(traces)}};
  report["note"] = "coset minimality of the points is not enforced; the walkthrough exercises the sign machinery";
  return report;
}

} // namespace proxinorm
