#include "proxinorm/approx_linearity.hpp"

#include "proxinorm/errors.hpp"
#include "proxinorm/gateaux.hpp"

#include <algorithm>
#include <set>
#include <string>

namespace proxinorm {

std::string_view to_string(Exclusion reason) {
  switch (reason) {
  case Exclusion::MaxSet:
    return "max-set E";
  case Exclusion::ZSupport:
    return "supp z_j";
  case Exclusion::FSet:
    break;
  }
  return "F_j";
}

Exclusion parse_exclusion(std::string_view text) {
  for (const Exclusion e : {Exclusion::MaxSet, Exclusion::ZSupport, Exclusion::FSet}) {
    if (text == to_string(e)) {
      return e;
    }
  }
  throw InputError("unknown exclusion reason \"" + std::string(text) + "\"");
}

SparseVec ApproxLinearityReport::gamma_functional() const {
  SparseVec out;
  for (const auto& [i, g] : gamma) {
    out.set(i, g);
  }
  return out;
}

bool ApproxLinearityReport::in_a0(Index i) const { return std::binary_search(a0_prefix.begin(), a0_prefix.end(), i); }

namespace {

std::int64_t available_terms(const ConstructionTable& table, std::int64_t k, std::int64_t terms) {
  const std::int64_t usable = std::min(terms, table.depth_budget() - k);
  if (usable < 1) {
    throw BudgetError("error sequence at k = " + std::to_string(k) + " needs table entries past the depth budget");
  }
  return usable;
}

} // namespace

Rational epsilon_lower(const ConstructionTable& table, std::int64_t k, std::int64_t terms) {
  const std::int64_t n = available_terms(table, k, terms);
  const std::int64_t ak = table.a(k);
  DyadicSum sum;
  for (std::int64_t l = k + 1; l <= k + n; ++l) {
    const std::int64_t al = table.a(l);
    sum.add(1, al * al - ak * ak);
  }
  return sum.value();
}

Rational epsilon_upper(const ConstructionTable& table, std::int64_t k, std::int64_t terms) {
  const std::int64_t n = available_terms(table, k, terms);
  const std::int64_t ak = table.a(k);
  const std::int64_t m = table.a(k + n) + 1;
  // sum_{j >= m} 2^(-j^2) <= (8/7) 2^(-m^2): successive terms shrink by 2^-(2j+1) <= 1/8.
  return epsilon_lower(table, k, n) + Rational(8, 7) * pow2(ak * ak - m * m);
}

ApproxLinearityReport build_report(const ConstructionTable& table, const SparseVec& x,
                                   const std::vector<SparseVec>& z_list, std::int64_t prefix_depth) {
  for (std::size_t j = 0; j < z_list.size(); ++j) {
    for (std::size_t l = j + 1; l < z_list.size(); ++l) {
      if (z_list[j] == z_list[l]) {
        throw PreconditionError("z_" + std::to_string(j + 1) + " and z_" + std::to_string(l + 1) + " coincide");
      }
    }
  }
  std::vector<Rational> pairings;
  for (std::size_t j = 0; j < z_list.size(); ++j) {
    pairings.push_back(pair(x, z_list[j]));
    if (sgn(pairings.back()) == 0) {
      throw HypothesisError("<x, z_" + std::to_string(j + 1) + "> = 0");
    }
  }

  ApproxLinearityReport report;
  report.x = x;
  report.z_list = z_list;
  report.prefix_depth = prefix_depth;
  table.ensure(prefix_depth);

  for (std::size_t j = 0; j < z_list.size(); ++j) {
    for (const std::int64_t k : table.positions(z_list[j], prefix_depth)) {
      report.owners[table.a(k)] = {k, j};
    }
  }
  for (const auto& [i, owner] : report.owners) {
    report.a_prefix.push_back(i);
  }

  const Rational top = sup_norm(x);
  std::set<Index> z_support;
  for (const auto& z : z_list) {
    for (const auto& [i, value] : z) {
      z_support.insert(i);
    }
  }

  for (const auto& [i, owner] : report.owners) {
    std::vector<Exclusion> reasons;
    const Rational xi = abs(x[i]);
    if (sgn(xi) != 0 && xi == top) {
      reasons.push_back(Exclusion::MaxSet);
    }
    if (z_support.count(i) != 0) {
      reasons.push_back(Exclusion::ZSupport);
    }
    if (xi >= abs(pairings[owner.j])) {
      reasons.push_back(Exclusion::FSet);
    }
    if (!reasons.empty()) {
      report.excluded.emplace(i, std::move(reasons));
      continue;
    }
    report.a0_prefix.push_back(i);
    const std::int64_t a = table.a(owner.k);
    report.gamma[i] = -sigma(pairings[owner.j]) * pow2(-a * a);
    report.eps_lower[i] = epsilon_lower(table, owner.k);
    report.eps_upper[i] = epsilon_upper(table, owner.k);
  }

  const Index horizon = table.a(prefix_depth);
  Index reach = std::max<Index>(x.max_support(), z_support.empty() ? 0 : *z_support.rbegin());
  report.cofinite_beyond_prefix = reach <= horizon;
  return report;
}

void require_on_a0(const ApproxLinearityReport& report, const SparseVec& v) {
  for (const auto& [i, value] : v) {
    if (!report.in_a0(i)) {
      throw PreconditionError("direction has index " + std::to_string(i) + " outside the A0-prefix");
    }
  }
}

LinearityCheck verify_7_1(const ConstructionTable& table, const ApproxLinearityReport& report, const SparseVec& v,
                          std::int64_t precision_bits, std::int64_t precision_cap) {
  require_on_a0(report, v);
  LinearityCheck out;
  if (v.is_zero()) {
    out.lhs = {0, 0, 1};
    out.rhs = 0;
    out.pass = true;
    return out;
  }
  Rational along = 0;
  for (const auto& [i, value] : v) {
    const Rational& g = report.gamma.at(i);
    along += value * g;
    out.rhs += report.eps_lower.at(i) * abs(value * g);
  }
  const std::int64_t bits = std::max(precision_bits, 2 - floor_log2(out.rhs));
  const DerivativeEnclosure d = d_plus_read_norm(table, report.x, v, bits, precision_cap);
  const Rational low = d.lo - along;
  const Rational high = d.hi - along;
  out.lhs.depth = d.depth;
  out.lhs.hi = std::max(abs(low), abs(high));
  out.lhs.lo = (sgn(low) <= 0 && sgn(high) >= 0) ? Rational(0) : std::min(abs(low), abs(high));
  out.pass = out.lhs.hi <= out.rhs;
  return out;
}

Rational coherence_margin(const ApproxLinearityReport& report, const SparseVec& v) {
  Rational along = 0;
  Rational slack = 0;
  for (const auto& [i, value] : v) {
    const Rational& g = report.gamma.at(i);
    along += value * g;
    slack += report.eps_upper.at(i) * abs(value * g);
  }
  return abs(along) - slack;
}

bool sign_coherence(const ApproxLinearityReport& report, const SparseVec& v) {
  require_on_a0(report, v);
  return sgn(coherence_margin(report, v)) > 0;
}

FeasibilityResult lemma10_feasibility(const ApproxLinearityReport& report, const std::vector<SparseVec>& phi,
                                      const std::vector<Index>& prefix, std::size_t elimination_budget) {
  LinearSystem system;
  for (std::size_t j = 0; j < phi.size(); ++j) {
    system.variables.push_back(static_cast<Index>(j + 1));
  }
  for (const Index i : prefix) {
    if (!report.in_a0(i)) {
      throw PreconditionError("feasibility prefix index " + std::to_string(i) + " is not in the A0-prefix");
    }
    const Rational& g = report.gamma.at(i);
    const Rational allowance = report.eps_lower.at(i) * abs(g);
    SparseVec row;
    for (std::size_t j = 0; j < phi.size(); ++j) {
      row.set(static_cast<Index>(j + 1), phi[j][i]);
    }
    system.constraints.push_back({row, Relation::LessEqual, g + allowance});
    system.constraints.push_back({-row, Relation::LessEqual, -g + allowance});
  }
  return feasible(system, elimination_budget);
}

} // namespace proxinorm
