#include "doctest.h"
#include "support.hpp"

#include "proxinorm/construction.hpp"
#include "proxinorm/errors.hpp"

#include <numeric>

using namespace proxinorm;

namespace {

// Every vector of height <= level, sorted by (support tuple, entry tuple),
// built by brute force over subsets of {1..level} and a value alphabet.
std::vector<SparseVec> level_oracle(std::int64_t level) {
  std::vector<Rational> values;
  for (std::int64_t q = 1; q < level; ++q) {
    for (std::int64_t p = 1; p + q <= level; ++p) {
      if (std::gcd(p, q) == 1) {
        values.push_back(ratio(p, q));
        values.push_back(ratio(-p, q));
      }
    }
  }
  std::vector<std::pair<std::vector<Index>, std::vector<Rational>>> keyed;
  for (std::uint32_t mask = 0; mask < (1u << level); ++mask) {
    std::vector<Index> support;
    for (std::int64_t i = 0; i < level; ++i) {
      if (mask & (1u << i)) {
        support.push_back(i + 1);
      }
    }
    std::vector<std::size_t> digit(support.size(), 0);
    if (!support.empty() && values.empty()) {
      continue;
    }
    while (true) {
      std::vector<Rational> entries;
      for (const std::size_t d : digit) {
        entries.push_back(values[d]);
      }
      keyed.emplace_back(support, entries);
      std::size_t pos = 0;
      while (pos < digit.size() && ++digit[pos] == values.size()) {
        digit[pos++] = 0;
      }
      if (pos == digit.size()) {
        break;
      }
    }
  }
  std::sort(keyed.begin(), keyed.end());
  std::vector<SparseVec> out;
  for (const auto& [support, entries] : keyed) {
    SparseVec v;
    for (std::size_t n = 0; n < support.size(); ++n) {
      v.set(support[n], entries[n]);
    }
    out.push_back(std::move(v));
  }
  return out;
}

} // namespace

TEST_CASE("height") {
  CHECK(height(SparseVec()) == 1);
  CHECK(height(SparseVec::unit(1)) == 2);
  CHECK(height(SparseVec::unit(5)) == 5);
  CHECK(height(SparseVec{{1, Rational(-3, 4)}}) == 7);
}

TEST_CASE("the first entry is the zero vector with a_1 = 1") {
  const ConstructionTable table;
  CHECK(table.entry(1).u.is_zero());
  CHECK(table.a(1) == 1);
  CHECK(table.a(0) == 0);
}

TEST_CASE("levels 1 to 4 match the brute-force enumeration") {
  const ConstructionTable table(ConstructionParams{20000});
  std::int64_t k = 1;
  for (std::int64_t level = 1; level <= 4; ++level) {
    const auto expected = level_oracle(level);
    for (const auto& v : expected) {
      REQUIRE(table.entry(k).u == v);
      ++k;
    }
  }
  CHECK(k - 1 == 1 + 9 + 343 + 14641);
}

TEST_CASE("a_k follows the least admissible recursion") {
  const ConstructionTable table;
  std::int64_t previous = 0;
  for (std::int64_t k = 1; k <= 3000; ++k) {
    const auto& e = table.entry(k);
    std::int64_t least = previous + 1;
    if (!e.u.is_zero()) {
      least = std::max(least, e.u.max_support() + 1);
      least = std::max<std::int64_t>(least, ceil(l1_norm(e.u)).get_si());
    }
    REQUIRE(e.a == least);
    CHECK(e.a > previous);
    if (!e.u.is_zero()) {
      CHECK(e.a > e.u.max_support());
      CHECK(Rational(e.a) >= l1_norm(e.u));
    }
    previous = e.a;
  }
}

TEST_CASE("entries are deterministic across calls and tables") {
  const ConstructionTable first;
  const ConstructionTable second;
  second.ensure(800);
  for (std::int64_t k = 800; k >= 1; k -= 37) {
    CHECK(first.entry(k).u == second.entry(k).u);
    CHECK(first.entry(k).a == second.entry(k).a);
    CHECK(&first.entry(k) == &first.entry(k));
  }
}

TEST_CASE("depth budget") {
  const ConstructionTable table(ConstructionParams{100});
  CHECK_NOTHROW(table.entry(100));
  CHECK_THROWS_AS(table.entry(101), BudgetError);
  CHECK_THROWS_AS(table.a_set(SparseVec::unit(1), 101), BudgetError);
  CHECK_THROWS_AS(ConstructionTable(ConstructionParams{0}), PreconditionError);
}

TEST_CASE("a_set examples") {
  const ConstructionTable table;
  const std::int64_t k_max = 400;
  std::vector<std::int64_t> all;
  for (std::int64_t k = 1; k <= k_max; ++k) {
    all.push_back(table.a(k));
  }
  testing_support::Rng rng(21);
  for (int n = 0; n < 40; ++n) {
    const SparseVec x = table.entry(rng.uniform(1, 360)).u;
    const auto a = table.a_set(x, k_max);
    REQUIRE_FALSE(a.empty());
    for (const auto value : a) {
      CHECK(std::binary_search(all.begin(), all.end(), value));
      if (!x.is_zero()) {
        CHECK(value > x.max_support());
      }
    }
    const auto pos = table.positions(x, k_max);
    REQUIRE(pos.size() == a.size());
    for (std::size_t i = 0; i < pos.size(); ++i) {
      CHECK(table.entry(pos[i]).u == x);
      CHECK(table.a(pos[i]) == a[i]);
    }
  }
}

TEST_CASE("each vector recurs at every later level") {
  const ConstructionTable table(ConstructionParams{20000});
  const std::int64_t end_level3 = 353;
  const std::int64_t end_level4 = end_level3 + 14641;
  for (std::int64_t k = 1; k <= 10; ++k) {
    const SparseVec x = table.entry(k).u;
    CHECK(table.a_set(x, end_level4).size() > table.a_set(x, end_level3).size());
    CHECK(table.a_set(x, end_level3).size() > table.a_set(x, 10).size() - 1);
  }
}

TEST_CASE("tail bound") {
  const ConstructionTable table;
  CHECK(table.tail_bound(0) < 2);
  for (std::int64_t K = 0; K < 60; ++K) {
    CHECK(table.tail_bound(K + 1) < table.tail_bound(K));
    CHECK(table.tail_bound(K) >= testing_support::tail_partial_oracle(table, K, 50));
  }
  CHECK_THROWS_AS(table.tail_bound(-1), PreconditionError);
}

TEST_CASE("series majorant dominates the integer series") {
  for (std::int64_t m = 1; m <= 30; ++m) {
    Rational partial = 0;
    for (std::int64_t n = m; n < m + 40; ++n) {
      partial += Rational(1 + n) * testing_support::half_power(n * n);
    }
    CHECK(series_tail_majorant(m) > partial);
  }
}

TEST_CASE("depth_for picks the least sufficient depth") {
  const ConstructionTable table;
  const Rational scales[] = {Rational(1), Rational(1, 1000), Rational(77, 3), Rational(1 << 20)};
  for (const Rational& scale : scales) {
    for (const std::int64_t bits : {1, 8, 64, 200, 1000}) {
      const std::int64_t K = table.depth_for(scale, bits);
      CHECK(scale * table.tail_bound(K) < pow2(-bits));
      if (K > 1) {
        CHECK(scale * table.tail_bound(K - 1) >= pow2(-bits));
      }
    }
  }
  const ConstructionTable small(ConstructionParams{10});
  CHECK_THROWS_AS(small.depth_for(Rational(1), 1000), BudgetError);
}
