// OpenMP kernels against their serial twins. Arg 0 runs serial, arg 1 parallel.

#include "instances.hpp"

#include "proxinorm/parallel.hpp"

#include <benchmark/benchmark.h>

using namespace proxinorm;
using testing_support::Rng;

namespace {

constexpr std::int64_t kPrefix = 480;

const ConstructionTable& warm_table() {
  static const ConstructionTable table;
  static const bool warmed = (table.entry(kPrefix), true);
  (void)warmed;
  return table;
}

std::vector<SparseVec> vectors(std::size_t count) {
  Rng rng(91);
  std::vector<SparseVec> xs;
  for (std::size_t n = 0; n < count; ++n) {
    xs.push_back(rng.sparse(static_cast<std::size_t>(rng.uniform(1, 6)), 30, 9, 9));
  }
  return xs;
}

ApproxLinearityReport sample_report() {
  const auto& table = warm_table();
  const auto pool = testing_support::recurring_vectors(table, kPrefix);
  Rng rng(93);
  for (;;) {
    const auto inst = testing_support::random_instance(rng, pool);
    auto report = build_report(table, inst.x, inst.z_list, kPrefix);
    if (report.a0_prefix.size() >= 8) {
      return report;
    }
  }
}

void BM_batch_read_norm(benchmark::State& state) {
  const auto& table = warm_table();
  const auto xs = vectors(256);
  const std::int64_t bits = 256;
  for (auto _ : state) {
    benchmark::DoNotOptimize(state.range(0) ? batch_read_norm(table, xs, bits) : batch_read_norm_serial(table, xs, bits));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(xs.size()));
}

void BM_score_candidates(benchmark::State& state) {
  const auto report = sample_report();
  const Subspace h({SparseVec::unit(1), SparseVec::unit(2)});
  const auto supports = candidate_supports(report.a0_prefix, 3, 400);
  for (auto _ : state) {
    benchmark::DoNotOptimize(state.range(0) ? score_candidates(report, h, supports)
                                            : score_candidates_serial(report, h, supports));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(supports.size()));
}

void BM_run_linearity_trials(benchmark::State& state) {
  const auto& table = warm_table();
  const auto report = sample_report();
  Rng rng(97);
  std::vector<SparseVec> directions;
  for (int n = 0; n < 64; ++n) {
    directions.push_back(testing_support::random_a0_direction(rng, report.a0_prefix));
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(state.range(0) ? run_linearity_trials(table, report, directions)
                                            : run_linearity_trials_serial(table, report, directions));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(directions.size()));
}

} // namespace

BENCHMARK(BM_batch_read_norm)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_score_candidates)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_run_linearity_trials)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
