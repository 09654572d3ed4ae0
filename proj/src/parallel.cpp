#include "proxinorm/parallel.hpp"

#include "proxinorm/linear_algebra.hpp"

#include <exception>
#include <mutex>

namespace proxinorm {

namespace {

// Runs body(i) for i in [0, n) across OpenMP threads and rethrows the first
// exception on the calling thread.
template <typename Body>
void parallel_for(std::size_t n, Body&& body) {
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < count; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) {
        failure = std::current_exception();
      }
    }
  }
  if (failure) {
    std::rethrow_exception(failure);
  }
}

std::vector<Candidate> score_support(const ApproxLinearityReport& report, const Subspace& h,
                                     const std::vector<Index>& support) {
  std::vector<Candidate> out;
  for (auto& v : kernel_directions(h.functionals(), support)) {
    Rational margin = coherence_margin(report, v);
    out.push_back({support, std::move(v), std::move(margin)});
  }
  return out;
}

LinearityTrial trial(const ConstructionTable& table, const ApproxLinearityReport& report, const SparseVec& v,
                     std::int64_t precision_bits) {
  const LinearityCheck check = verify_7_1(table, report, v, precision_bits);
  return {v, check.lhs, check.rhs, check.pass};
}

} // namespace

std::vector<Enclosure> batch_read_norm(const ConstructionTable& table, const std::vector<SparseVec>& xs,
                                       std::int64_t precision_bits) {
  std::vector<Enclosure> out(xs.size());
  parallel_for(xs.size(), [&](std::size_t i) { out[i] = read_norm(table, xs[i], precision_bits); });
  return out;
}

std::vector<Enclosure> batch_read_norm_serial(const ConstructionTable& table, const std::vector<SparseVec>& xs,
                                              std::int64_t precision_bits) {
  std::vector<Enclosure> out;
  out.reserve(xs.size());
  for (const auto& x : xs) {
    out.push_back(read_norm(table, x, precision_bits));
  }
  return out;
}

std::vector<Candidate> score_candidates(const ApproxLinearityReport& report, const Subspace& h,
                                        const std::vector<std::vector<Index>>& supports) {
  std::vector<std::vector<Candidate>> per_support(supports.size());
  parallel_for(supports.size(), [&](std::size_t i) { per_support[i] = score_support(report, h, supports[i]); });
  std::vector<Candidate> out;
  for (auto& group : per_support) {
    for (auto& c : group) {
      out.push_back(std::move(c));
    }
  }
  return out;
}

std::vector<Candidate> score_candidates_serial(const ApproxLinearityReport& report, const Subspace& h,
                                               const std::vector<std::vector<Index>>& supports) {
  std::vector<Candidate> out;
  for (const auto& support : supports) {
    for (auto& c : score_support(report, h, support)) {
      out.push_back(std::move(c));
    }
  }
  return out;
}

std::vector<LinearityTrial> run_linearity_trials(const ConstructionTable& table, const ApproxLinearityReport& report,
                                                 const std::vector<SparseVec>& directions,
                                                 std::int64_t precision_bits) {
  std::vector<LinearityTrial> out(directions.size());
  parallel_for(directions.size(),
               [&](std::size_t i) { out[i] = trial(table, report, directions[i], precision_bits); });
  return out;
}

std::vector<LinearityTrial> run_linearity_trials_serial(const ConstructionTable& table,
                                                        const ApproxLinearityReport& report,
                                                        const std::vector<SparseVec>& directions,
                                                        std::int64_t precision_bits) {
  std::vector<LinearityTrial> out;
  for (const auto& v : directions) {
    out.push_back(trial(table, report, v, precision_bits));
  }
  return out;
}

} // namespace proxinorm
