#include "doctest.h"
#include "instances.hpp"

#include "proxinorm/approx_linearity.hpp"
#include "proxinorm/errors.hpp"
#include "proxinorm/gateaux.hpp"
#include "proxinorm/json_io.hpp"

#include <set>

using namespace proxinorm;
using testing_support::Rng;

namespace {

constexpr std::int64_t kPrefix = 480;

const ConstructionTable& shared_table() {
  static const ConstructionTable table;
  return table;
}

const std::vector<SparseVec>& pool() {
  static const auto vectors = testing_support::recurring_vectors(shared_table(), kPrefix);
  return vectors;
}

// 2^(a_k^2) sum_{k < l <= k + 50} 2^(-a_l^2), by direct rational arithmetic.
Rational epsilon_oracle(const ConstructionTable& table, std::int64_t k) {
  const std::int64_t ak = table.a(k);
  Rational total = 0;
  for (std::int64_t l = k + 1; l <= k + 50; ++l) {
    const std::int64_t al = table.a(l);
    total += testing_support::half_power(al * al - ak * ak);
  }
  return total;
}

} // namespace

TEST_CASE("the recurring pool is nonempty and recurs") {
  CHECK(pool().size() >= 8);
  for (const auto& z : pool()) {
    CHECK(z.max_support() <= 2);
  }
}

TEST_CASE("exclusion strings round-trip") {
  for (const auto e : {Exclusion::MaxSet, Exclusion::ZSupport, Exclusion::FSet}) {
    CHECK(parse_exclusion(to_string(e)) == e);
  }
  CHECK(to_string(Exclusion::MaxSet) == "max-set E");
  CHECK_THROWS_AS(parse_exclusion("other"), InputError);
}

TEST_CASE("build_report matches a direct scan of the table") {
  const auto& table = shared_table();
  Rng rng(101);
  for (int n = 0; n < 40; ++n) {
    const auto inst = testing_support::random_instance(rng, pool());
    const auto report = build_report(table, inst.x, inst.z_list, kPrefix);
    std::vector<Index> a_oracle;
    std::set<Index> z_support;
    for (const auto& z : inst.z_list) {
      for (const Index i : z.support()) {
        z_support.insert(i);
      }
    }
    const Rational top = sup_norm(inst.x);
    for (std::int64_t k = 1; k <= kPrefix; ++k) {
      const auto& e = table.entry(k);
      const auto it = std::find(inst.z_list.begin(), inst.z_list.end(), e.u);
      if (it == inst.z_list.end()) {
        continue;
      }
      const Rational zx = pair(inst.x, *it);
      a_oracle.push_back(e.a);
      const Rational xi = testing_support::abs_q(inst.x[e.a]);
      const bool excluded = (xi != 0 && xi == top) || z_support.count(e.a) != 0 || xi >= testing_support::abs_q(zx);
      CHECK(report.in_a0(e.a) == !excluded);
      CHECK(report.excluded.count(e.a) == (excluded ? 1u : 0u));
      if (!excluded) {
        const Rational g = report.gamma.at(e.a);
        CHECK(g == -sigma(zx) * testing_support::half_power(e.a * e.a));
        CHECK(sigma(g) == -sigma(zx));
        CHECK(report.eps_lower.at(e.a) == epsilon_oracle(table, k));
        CHECK(report.eps_upper.at(e.a) > report.eps_lower.at(e.a));
        CHECK(report.eps_upper.at(e.a) - report.eps_lower.at(e.a) < pow2(-1000));
      }
    }
    CHECK(report.a_prefix == a_oracle);
    for (const auto& [i, reasons] : report.excluded) {
      CHECK_FALSE(reasons.empty());
    }
    Rational previous = 2;
    for (const Index i : report.a0_prefix) {
      CHECK(report.eps_upper.at(i) > 0);
      CHECK(report.eps_upper.at(i) < previous);
      previous = report.eps_upper.at(i);
    }
    CHECK(report.cofinite_beyond_prefix);
  }
}

TEST_CASE("exclusions stabilise as the prefix grows") {
  const auto& table = shared_table();
  Rng rng(103);
  for (int n = 0; n < 10; ++n) {
    const auto inst = testing_support::random_instance(rng, pool());
    const auto small = build_report(table, inst.x, inst.z_list, kPrefix);
    const auto large = build_report(table, inst.x, inst.z_list, 2 * kPrefix);
    CHECK(small.excluded.size() == large.excluded.size());
    CHECK(large.a_prefix.size() >= small.a_prefix.size());
  }
}

TEST_CASE("hypothesis and precondition errors") {
  const auto& table = shared_table();
  const SparseVec x = SparseVec::unit(1);
  CHECK_THROWS_AS(build_report(table, x, {SparseVec::unit(2)}, 100), HypothesisError);
  CHECK_THROWS_AS(build_report(table, x, {SparseVec::unit(1), SparseVec::unit(1)}, 100), PreconditionError);
  const auto report = build_report(table, SparseVec{{1, Rational(1)}, {3, Rational(1, 4)}}, {SparseVec::unit(1)}, 400);
  CHECK_THROWS_AS(verify_7_1(table, report, SparseVec::unit(1)), PreconditionError);
}

TEST_CASE("epsilon bounds bracket a long exact sum") {
  const auto& table = shared_table();
  for (std::int64_t k = 1; k <= 60; k += 7) {
    const Rational longer = epsilon_lower(table, k, 200);
    CHECK(epsilon_lower(table, k) <= longer);
    CHECK(longer <= epsilon_upper(table, k));
  }
  const ConstructionTable tiny(ConstructionParams{20});
  CHECK_THROWS_AS(epsilon_lower(tiny, 20), BudgetError);
}

TEST_CASE("verify_7_1 passes on A0 directions") {
  const auto& table = shared_table();
  Rng rng(107);
  int checked = 0;
  for (int n = 0; n < 20; ++n) {
    const auto inst = testing_support::random_instance(rng, pool());
    const auto report = build_report(table, inst.x, inst.z_list, kPrefix);
    if (report.a0_prefix.empty()) {
      continue;
    }
    CHECK(verify_7_1(table, report, SparseVec()).pass);
    CHECK(verify_7_1(table, report, SparseVec::unit(report.a0_prefix.front())).pass);
    for (int t = 0; t < 5; ++t) {
      const SparseVec v = testing_support::random_a0_direction(rng, report.a0_prefix);
      const auto check = verify_7_1(table, report, v);
      CHECK(check.pass);
      CHECK(check.lhs.hi <= check.rhs);
      ++checked;
    }
  }
  CHECK(checked >= 50);
}

TEST_CASE("sign coherence") {
  const auto& table = shared_table();
  Rng rng(109);
  int coherent = 0;
  for (int n = 0; n < 20; ++n) {
    const auto inst = testing_support::random_instance(rng, pool());
    const auto report = build_report(table, inst.x, inst.z_list, kPrefix);
    if (report.a0_prefix.empty()) {
      continue;
    }
    const Index i = report.a0_prefix.front();
    CHECK(sign_coherence(report, SparseVec::unit(i)));
    if (report.a0_prefix.size() >= 2) {
      const Index j = report.a0_prefix[1];
      const SparseVec flat{{i, report.gamma.at(j)}, {j, -report.gamma.at(i)}};
      CHECK(pair(flat, report.gamma_functional()) == 0);
      CHECK_FALSE(sign_coherence(report, flat));
    }
    for (int t = 0; t < 5; ++t) {
      const SparseVec v = testing_support::random_a0_direction(rng, report.a0_prefix);
      if (!sign_coherence(report, v)) {
        continue;
      }
      ++coherent;
      const auto bits = std::max<std::int64_t>(64, 8 - floor_log2(coherence_margin(report, v)));
      const auto plus = d_plus_read_norm(table, report.x, v, bits);
      const auto minus = d_minus_read_norm(table, report.x, v, bits);
      CHECK(plus.sign != SignStatus::StraddlesZero);
      CHECK(plus.sign == minus.sign);
      CHECK((plus.sign == SignStatus::Positive) == (pair(v, report.gamma_functional()) > 0));
    }
  }
  CHECK(coherent >= 20);
}

TEST_CASE("feasibility with and without the gamma functional") {
  const auto& table = shared_table();
  Rng rng(113);
  int tested = 0;
  for (int n = 0; n < 30 && tested < 8; ++n) {
    const auto inst = testing_support::random_instance(rng, pool());
    const auto report = build_report(table, inst.x, inst.z_list, kPrefix);
    if (report.a0_prefix.size() < 2) {
      continue;
    }
    ++tested;
    const auto& prefix = report.a0_prefix;
    const auto with_gamma = lemma10_feasibility(report, {report.gamma_functional()}, prefix);
    REQUIRE(with_gamma.satisfiable);
    const Rational c = (*with_gamma.witness)[1];
    for (const Index i : prefix) {
      const Rational g = report.gamma.at(i);
      CHECK(testing_support::abs_q(c * g - g) <= report.eps_lower.at(i) * testing_support::abs_q(g));
    }
    const Index outside = prefix.back() + 1;
    CHECK_FALSE(lemma10_feasibility(report, {SparseVec::unit(outside)}, prefix).satisfiable);
    const std::vector<SparseVec> coordinates{SparseVec::unit(1), SparseVec::unit(2)};
    const std::vector<Index> first(prefix.begin(), prefix.begin() + 1);
    const bool small = lemma10_feasibility(report, coordinates, first).satisfiable;
    const bool large = lemma10_feasibility(report, coordinates, prefix).satisfiable;
    CHECK((small || !large));
    CHECK_THROWS_AS(lemma10_feasibility(report, coordinates, {report.excluded.empty() ? 1 : report.excluded.begin()->first}),
                    PreconditionError);
  }
  CHECK(tested >= 5);
}

TEST_CASE("reports round-trip through JSON") {
  const auto& table = shared_table();
  Rng rng(127);
  for (int n = 0; n < 5; ++n) {
    const auto inst = testing_support::random_instance(rng, pool());
    auto report = build_report(table, inst.x, inst.z_list, kPrefix);
    if (!report.a0_prefix.empty()) {
      const SparseVec v = SparseVec::unit(report.a0_prefix.front());
      const auto check = verify_7_1(table, report, v);
      report.trials.push_back({v, check.lhs, check.rhs, check.pass});
    }
    const json j = to_json(report);
    const auto back = report_from_json(json::parse(j.dump()));
    CHECK(to_json(back) == j);
    CHECK(back.a0_prefix == report.a0_prefix);
    CHECK(back.gamma == report.gamma);
  }
}
