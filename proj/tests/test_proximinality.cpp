#include "doctest.h"
#include "support.hpp"

#include "proxinorm/errors.hpp"
#include "proxinorm/json_io.hpp"
#include "proxinorm/proximinality.hpp"

#include <functional>

using namespace proxinorm;
using testing_support::Rng;

namespace {

const SparseVec e1 = SparseVec::unit(1);
const SparseVec e2 = SparseVec::unit(2);

const ConstructionTable& shared_table() {
  static const ConstructionTable table;
  return table;
}

SparseVec random_start(Rng& rng) {
  SparseVec x = rng.sparse(static_cast<std::size_t>(rng.uniform(1, 4)), 12, 5, 4);
  x.set(1, rng.nonzero_rational(3, 4));
  x.set(2, rng.nonzero_rational(3, 4));
  return x;
}

const std::vector<DescentCertificate>& sample_chain() {
  static const auto chain = [] {
    Rng rng(211);
    const Subspace h({e1, e2});
    return minimizing_sequence(shared_table(), h, random_start(rng), 4);
  }();
  return chain;
}

} // namespace

TEST_CASE("subspace construction") {
  CHECK_THROWS_AS(Subspace({}), PreconditionError);
  CHECK_THROWS_AS(Subspace({e1, Rational(2) * e1}), PreconditionError);
  CHECK_THROWS_AS(Subspace({SparseVec()}), PreconditionError);
  const Subspace h({e1, e2 + e1});
  CHECK(h.codimension() == 2);
  CHECK(h.contains(SparseVec::unit(5)));
  CHECK_FALSE(h.contains(e2));
  CHECK(h.coset_values(SparseVec{{1, Rational(1)}, {2, Rational(3)}}) == std::vector<Rational>{1, 4});
}

TEST_CASE("candidate supports come in (max, lex) order") {
  const std::vector<Index> pool{3, 5, 8, 13, 21, 34};
  const auto supports = candidate_supports(pool, 3, 1000);
  std::vector<std::vector<Index>> oracle;
  for (std::size_t a = 0; a < pool.size(); ++a) {
    for (std::size_t b = a + 1; b < pool.size(); ++b) {
      for (std::size_t c = b + 1; c < pool.size(); ++c) {
        oracle.push_back({pool[a], pool[b], pool[c]});
      }
    }
  }
  std::sort(oracle.begin(), oracle.end(), [](const auto& x, const auto& y) {
    return x.back() != y.back() ? x.back() < y.back() : x < y;
  });
  CHECK(supports == oracle);
  CHECK(candidate_supports(pool, 3, 7).size() == 7);
  CHECK(candidate_supports({4, 9}, 3, 10) == std::vector<std::vector<Index>>{{4, 9}});
  CHECK(candidate_supports({}, 3, 10).empty());
}

TEST_CASE("descent directions at codimension 2") {
  const auto& table = shared_table();
  const Subspace h({e1, e2});
  Rng rng(223);
  for (int n = 0; n < 8; ++n) {
    const SparseVec x = random_start(rng);
    const auto d = find_descent_direction(table, h, x);
    REQUIRE(d.has_value());
    CHECK(h.contains(d->v));
    CHECK(d->margin > 0);
    CHECK(d->evidence.d_plus.sign != SignStatus::StraddlesZero);
    CHECK(d->evidence.d_plus.sign == d->evidence.d_minus.sign);
    const auto report = build_report(table, x, d->z_list, SearchParams{}.prefix_depth);
    for (const Index i : d->v.support()) {
      CHECK(report.in_a0(i));
    }
    CHECK(coherence_margin(report, d->v) == d->margin);
  }
  CHECK_THROWS_AS(find_descent_direction(table, h, SparseVec::unit(7)), PreconditionError);
}

TEST_CASE("codimension 1 never fabricates a direction") {
  const auto& table = shared_table();
  const Subspace h({e1});
  const SparseVec x{{1, Rational(1)}, {2, Rational(1)}};
  const auto d = find_descent_direction(table, h, x);
  if (d) {
    CHECK(h.contains(d->v));
    CHECK(d->evidence.d_plus.sign == d->evidence.d_minus.sign);
    CHECK(d->evidence.d_plus.sign != SignStatus::StraddlesZero);
  }
}

TEST_CASE("certify_descent chooses the step against the derivative") {
  const auto& table = shared_table();
  const Subspace h({e1, e2});
  Rng rng(227);
  for (int n = 0; n < 4; ++n) {
    const SparseVec x = random_start(rng);
    const auto d = find_descent_direction(table, h, x);
    REQUIRE(d.has_value());
    const auto cert = certify_descent(table, h, x, d->v, d->evidence);
    CHECK((d->evidence.d_plus.sign == SignStatus::Positive) == (cert.h < 0));
    CHECK(is_dyadic(cert.h));
    CHECK(cert.norm_after.hi < cert.norm_before.lo);
    CHECK(h.coset_values(cert.x_next) == h.coset_values(x));

    // First-order prediction |h| |d| is within a factor 2 of the actual
    // decrease once h is small.
    const Rational small = pow2(-16) * (cert.h < 0 ? -1 : 1);
    const Rational slope = abs(d->evidence.d_plus.midpoint());
    const std::int64_t depth = std::max(cert.norm_before.depth, d->evidence.d_plus.depth) + 20;
    const Rational before = testing_support::norm_partial_oracle(table, x, depth);
    const Rational after = testing_support::norm_partial_oracle(table, x + small * d->v, depth);
    const Rational decrease = before - after;
    const Rational predicted = abs(small) * slope;
    CHECK(decrease > predicted / 2);
    CHECK(decrease < 2 * predicted);
  }
  CHECK_THROWS_AS(certify_descent(table, h, e1, e1, SignEvidence{}), PreconditionError);
}

TEST_CASE("minimizing sequences stay in the coset and strictly decrease") {
  const auto& chain = sample_chain();
  REQUIRE(chain.size() == 4);
  const Subspace h({e1, e2});
  const auto coset = h.coset_values(chain.front().x);
  for (std::size_t t = 0; t < chain.size(); ++t) {
    CHECK(h.coset_values(chain[t].x) == coset);
    CHECK(h.contains(chain[t].v));
    CHECK(chain[t].norm_after.hi < chain[t].norm_before.lo);
    if (t > 0) {
      CHECK(chain[t].x == chain[t - 1].x_next);
      CHECK(chain[t].norm_before.hi <= chain[t - 1].norm_before.hi);
    }
  }
  const auto verdict = verify_chain(shared_table(), chain);
  CHECK(verdict.ok);
  CHECK(verdict.failures.empty());
  CHECK_THROWS_AS(minimizing_sequence(shared_table(), h, SparseVec::unit(4), 2), PreconditionError);
  CHECK_THROWS_AS(minimizing_sequence(shared_table(), h, e1, 0), PreconditionError);
}

TEST_CASE("a search budget stops the sequence early") {
  const Subspace h({e1, e2});
  const ConstructionTable shallow(ConstructionParams{30});
  const auto chain = minimizing_sequence(shallow, h, SparseVec{{1, Rational(1)}, {2, Rational(1)}}, 3);
  CHECK(chain.empty());
}

TEST_CASE("every single-field tamper is detected") {
  const auto& table = shared_table();
  const DescentCertificate original = sample_chain().front();
  REQUIRE(verify_certificate(table, original).ok);
  const std::vector<std::pair<const char*, std::function<void(DescentCertificate&)>>> tampers{
      {"x", [](DescentCertificate& c) { c.x.set(9, c.x[9] + pow2(-30)); }},
      {"x coset", [](DescentCertificate& c) { c.x.set(1, c.x[1] + 1); }},
      {"v", [](DescentCertificate& c) { c.v.set(c.v.max_support() + 1, 1); }},
      {"v scaled", [](DescentCertificate& c) { c.v *= 2; }},
      {"h", [](DescentCertificate& c) { c.h /= 2; }},
      {"x_next", [](DescentCertificate& c) { c.x_next.set(9, c.x_next[9] + pow2(-30)); }},
      {"x_next far", [](DescentCertificate& c) { c.x_next.set(900, 1); }},
      {"h sign", [](DescentCertificate& c) { c.h = -c.h; }},
      {"norm_before.lo", [](DescentCertificate& c) { c.norm_before.lo -= pow2(-200); }},
      {"norm_before.hi", [](DescentCertificate& c) { c.norm_before.hi += pow2(-200); }},
      {"norm_before.depth", [](DescentCertificate& c) { c.norm_before.depth += 1; }},
      {"norm_after.lo", [](DescentCertificate& c) { c.norm_after.lo -= pow2(-200); }},
      {"norm_after.hi", [](DescentCertificate& c) { c.norm_after.hi -= pow2(-200); }},
      {"norm_after.depth", [](DescentCertificate& c) { c.norm_after.depth -= 1; }},
      {"d_plus.lo", [](DescentCertificate& c) { c.d_plus.lo += pow2(-300); }},
      {"d_plus.depth", [](DescentCertificate& c) { c.d_plus.depth += 1; }},
      {"d_plus.sign", [](DescentCertificate& c) { c.d_plus.sign = SignStatus::StraddlesZero; }},
      {"d_minus.hi", [](DescentCertificate& c) { c.d_minus.hi -= pow2(-300); }},
      {"d_minus.sign",
       [](DescentCertificate& c) {
         c.d_minus.sign = c.d_minus.sign == SignStatus::Positive ? SignStatus::Negative : SignStatus::Positive;
       }},
      {"functionals", [](DescentCertificate& c) { c.functionals[1] = SparseVec::unit(3); }},
      {"coset", [](DescentCertificate& c) { c.coset[0] += 1; }},
  };
  for (const auto& [name, tamper] : tampers) {
    DescentCertificate copy = original;
    tamper(copy);
    INFO(std::string(name));
    CHECK_FALSE(verify_certificate(table, copy).ok);
  }
}

TEST_CASE("chains round-trip through JSON and keep verifying") {
  const auto& chain = sample_chain();
  const json j = chain_to_json(chain);
  const auto back = chain_from_json(json::parse(j.dump()));
  REQUIRE(back.size() == chain.size());
  CHECK(chain_to_json(back) == j);
  CHECK(verify_chain(shared_table(), back).ok);
  auto broken = back;
  std::swap(broken[1], broken[2]);
  CHECK_FALSE(verify_chain(shared_table(), broken).ok);
  CHECK(chain_from_json(to_json(chain.front())).size() == 1);
  CHECK(chain_from_json(j.at("certificates")).size() == chain.size());
}
