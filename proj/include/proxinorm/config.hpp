#pragma once

#include <cstdint>
#include <string>

namespace proxinorm {

/// Run-wide budgets. Sources, lowest precedence first: defaults, a flat
/// key = value config file, PROXINORM_* environment variables, CLI flags.
struct Config {
  std::int64_t depth_budget = 5000;
  std::int64_t precision_bits = 64;
  std::int64_t precision_cap = std::int64_t{1} << 22;
  std::int64_t elimination_budget = 20000;
  std::int64_t demo_n = 2;
  std::int64_t rounding_denominator_bits = 16;
  std::int64_t prefix_depth = 500;
};

/// Reads `key = value` lines; '#' starts a comment, blank lines are ignored,
/// an optional [section] header is skipped. Unknown keys or non-positive
/// values throw InputError.
void load_config_file(const std::string& path, Config& config);

/// Applies PROXINORM_DEPTH_BUDGET, PROXINORM_PRECISION_BITS, ... overrides.
void apply_environment(Config& config);

void set_config_value(Config& config, const std::string& key, const std::string& value);

} // namespace proxinorm
