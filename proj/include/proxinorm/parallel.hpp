#pragma once

// Data-parallel kernels. Each OpenMP kernel has a serial twin with the same
// contract; tests compare them element by element and bench/ times them.

#include "proxinorm/approx_linearity.hpp"
#include "proxinorm/construction.hpp"
#include "proxinorm/norm.hpp"
#include "proxinorm/proximinality.hpp"

#include <cstdint>
#include <vector>

namespace proxinorm {

std::vector<Enclosure> batch_read_norm(const ConstructionTable& table, const std::vector<SparseVec>& xs,
                                       std::int64_t precision_bits = kDefaultPrecisionBits);
std::vector<Enclosure> batch_read_norm_serial(const ConstructionTable& table, const std::vector<SparseVec>& xs,
                                              std::int64_t precision_bits = kDefaultPrecisionBits);

/// Kernel basis on each support, scored by coherence margin. Output order
/// follows `supports`, basis vectors in kernel order.
std::vector<Candidate> score_candidates(const ApproxLinearityReport& report, const Subspace& h,
                                        const std::vector<std::vector<Index>>& supports);
std::vector<Candidate> score_candidates_serial(const ApproxLinearityReport& report, const Subspace& h,
                                               const std::vector<std::vector<Index>>& supports);

std::vector<LinearityTrial> run_linearity_trials(const ConstructionTable& table,
                                                 const ApproxLinearityReport& report,
                                                 const std::vector<SparseVec>& directions,
                                                 std::int64_t precision_bits = kDefaultPrecisionBits);
std::vector<LinearityTrial> run_linearity_trials_serial(const ConstructionTable& table,
                                                        const ApproxLinearityReport& report,
                                                        const std::vector<SparseVec>& directions,
                                                        std::int64_t precision_bits = kDefaultPrecisionBits);

} // namespace proxinorm
