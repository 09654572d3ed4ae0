#include "proxinorm/config.hpp"

#include "proxinorm/errors.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <utility>

namespace proxinorm {

namespace {

using Field = std::int64_t Config::*;

constexpr std::array<std::pair<const char*, Field>, 7> kFields{{
    {"depth_budget", &Config::depth_budget},
    {"precision_bits", &Config::precision_bits},
    {"precision_cap", &Config::precision_cap},
    {"elimination_budget", &Config::elimination_budget},
    {"demo_n", &Config::demo_n},
    {"rounding_denominator_bits", &Config::rounding_denominator_bits},
    {"prefix_depth", &Config::prefix_depth},
}};

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

} // namespace

void set_config_value(Config& config, const std::string& key, const std::string& value) {
  const auto it = std::find_if(kFields.begin(), kFields.end(), [&](const auto& f) { return key == f.first; });
  if (it == kFields.end()) {
    throw InputError("unknown config key '" + key + "'");
  }
  std::int64_t parsed = 0;
  try {
    std::size_t used = 0;
    parsed = std::stoll(value, &used);
    if (used != value.size()) {
      throw std::invalid_argument(value);
    }
  } catch (const std::exception&) {
    throw InputError("config key '" + key + "': '" + value + "' is not an integer");
  }
  if (parsed <= 0) {
    throw InputError("config key '" + key + "' must be positive");
  }
  config.*(it->second) = parsed;
}

void load_config_file(const std::string& path, Config& config) {
  std::ifstream in(path);
  if (!in) {
    throw InputError("cannot open config file '" + path + "'");
  }
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    line = trim(line.substr(0, line.find('#')));
    if (line.empty() || line.front() == '[') {
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw InputError(path + ":" + std::to_string(number) + ": expected key = value");
    }
    set_config_value(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
}

void apply_environment(Config& config) {
  for (const auto& [name, field] : kFields) {
    std::string env = "PROXINORM_";
    for (const char* c = name; *c; ++c) {
      env.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(*c))));
    }
    if (const char* value = std::getenv(env.c_str())) {
      set_config_value(config, name, value);
    }
  }
}

} // namespace proxinorm
