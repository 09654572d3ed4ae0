#include "proxinorm/cli.hpp"

#include "proxinorm/approx_linearity.hpp"
#include "proxinorm/config.hpp"
#include "proxinorm/construction.hpp"
#include "proxinorm/errors.hpp"
#include "proxinorm/gateaux.hpp"
#include "proxinorm/json_io.hpp"
#include "proxinorm/norm.hpp"
#include "proxinorm/parallel.hpp"
#include "proxinorm/proximinality.hpp"
#include "proxinorm/theorem_demo.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace proxinorm {

namespace {

struct Overrides {
  std::string config_file;
  std::optional<std::int64_t> depth_budget;
  std::optional<std::int64_t> precision_bits;
  std::optional<std::int64_t> precision_cap;
  std::optional<std::int64_t> elimination_budget;
};

Config resolve_config(const Overrides& o) {
  Config config;
  if (!o.config_file.empty()) {
    load_config_file(o.config_file, config);
  }
  apply_environment(config);
  const auto apply = [&](const std::optional<std::int64_t>& v, const char* key) {
    if (v) {
      set_config_value(config, key, std::to_string(*v));
    }
  };
  apply(o.depth_budget, "depth_budget");
  apply(o.precision_bits, "precision_bits");
  apply(o.precision_cap, "precision_cap");
  apply(o.elimination_budget, "elimination_budget");
  return config;
}

SparseVec read_vector(const std::string& path) {
  return sparse_from_json(read_json_file(path), path);
}

std::vector<SparseVec> read_vectors(const std::vector<std::string>& paths) {
  std::vector<SparseVec> out;
  for (const auto& p : paths) {
    out.push_back(read_vector(p));
  }
  return out;
}

// Directions supported on 1 to 3 indices drawn from the first indices of the
// A0-prefix, with entries in {+-1, +-1/2}.
std::vector<SparseVec> random_directions(const std::vector<Index>& a0, int count, std::uint64_t seed) {
  std::vector<SparseVec> out;
  if (a0.empty()) {
    return out;
  }
  std::mt19937_64 rng(seed);
  const std::size_t pool = std::min<std::size_t>(a0.size(), 24);
  static const Rational kValues[] = {Rational(1), Rational(-1), Rational(1, 2), Rational(-1, 2)};
  for (int n = 0; n < count; ++n) {
    SparseVec v;
    const int size = 1 + static_cast<int>(rng() % 3);
    for (int s = 0; s < size; ++s) {
      v.set(a0[rng() % pool], kValues[rng() % 4]);
    }
    if (v.is_zero()) {
      v.set(a0.front(), Rational(1));
    }
    out.push_back(std::move(v));
  }
  return out;
}

void print(std::ostream& out, const json& j) { out << j.dump() << '\n'; }

} // namespace

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact computations with the renormed c0 norm"};
  app.require_subcommand(1);
  Overrides overrides;
  app.add_option("--config", overrides.config_file, "key = value config file")->check(CLI::ExistingFile);
  app.add_option("--depth-budget", overrides.depth_budget, "largest table index");
  app.add_option("--precision-cap", overrides.precision_cap, "largest precision in bits");
  app.add_option("--elimination-budget", overrides.elimination_budget, "Fourier-Motzkin row budget");

  auto* construct = app.add_subcommand("construct", "dump the table prefix as JSON lines");
  std::int64_t k_max = 10;
  construct->add_option("--k-max", k_max)->required()->check(CLI::PositiveNumber);

  auto* norm = app.add_subcommand("norm", "certified enclosure of the norm");
  std::string vec_file;
  norm->add_option("--vec", vec_file)->required();
  norm->add_option("--bits", overrides.precision_bits);

  auto* deriv = app.add_subcommand("deriv", "one-sided directional derivative");
  std::string x_file;
  std::string u_file;
  bool minus = false;
  deriv->add_option("--x", x_file)->required();
  deriv->add_option("--u", u_file)->required();
  deriv->add_flag("--minus", minus, "left derivative");
  deriv->add_option("--bits", overrides.precision_bits);

  auto* approxlin = app.add_subcommand("approxlin", "approximate linearity report");
  std::vector<std::string> z_files;
  std::int64_t prefix = -1;
  int trials = 0;
  std::uint64_t seed = 1;
  approxlin->add_option("--x", x_file)->required();
  approxlin->add_option("--z", z_files)->required();
  approxlin->add_option("--prefix", prefix);
  approxlin->add_option("--trials", trials)->check(CLI::NonNegativeNumber);
  approxlin->add_option("--seed", seed);
  approxlin->add_option("--bits", overrides.precision_bits);

  auto* feasible_cmd = app.add_subcommand("feasible", "search phi in span(Phi) close to gamma");
  std::string report_file;
  std::vector<std::string> phi_files;
  feasible_cmd->add_option("--report", report_file)->required();
  feasible_cmd->add_option("--phi", phi_files)->required();

  auto* descend = app.add_subcommand("descend", "certified minimizing sequence");
  std::string x0_file;
  int steps = 1;
  descend->add_option("--phi", phi_files)->required();
  descend->add_option("--x0", x0_file)->required();
  descend->add_option("--steps", steps)->check(CLI::PositiveNumber);
  descend->add_option("--prefix", prefix);
  descend->add_option("--bits", overrides.precision_bits);

  auto* verify = app.add_subcommand("verify", "re-check descent certificates");
  std::string cert_file;
  verify->add_option("--cert", cert_file)->required();

  auto* demo = app.add_subcommand("demo", "codimension-N walkthrough");
  std::optional<std::int64_t> demo_n;
  demo->add_option("--n", demo_n);
  demo->add_option("--prefix", prefix);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitInvalid;
  }

  try {
    const Config config = resolve_config(overrides);
    const ConstructionTable table(ConstructionParams{config.depth_budget});
    const std::int64_t bits = config.precision_bits;
    const std::int64_t cap = config.precision_cap;
    const std::int64_t prefix_depth = prefix > 0 ? prefix : config.prefix_depth;

    if (*construct) {
      for (std::int64_t k = 1; k <= k_max; ++k) {
        print(out, to_json(table.entry(k)));
      }
    } else if (*norm) {
      print(out, to_json(read_norm(table, read_vector(vec_file), bits, cap)));
    } else if (*deriv) {
      const SparseVec x = read_vector(x_file);
      const SparseVec u = read_vector(u_file);
      print(out, to_json(minus ? d_minus_read_norm(table, x, u, bits, cap) : d_plus_read_norm(table, x, u, bits, cap)));
    } else if (*approxlin) {
      ApproxLinearityReport report = build_report(table, read_vector(x_file), read_vectors(z_files), prefix_depth);
      report.trials = run_linearity_trials(table, report, random_directions(report.a0_prefix, trials, seed), bits);
      print(out, to_json(report));
      const bool all_pass = std::all_of(report.trials.begin(), report.trials.end(), [](const auto& t) { return t.pass; });
      if (!all_pass) {
        err << "approxlin: some trials failed\n";
        return kExitInvalid;
      }
    } else if (*feasible_cmd) {
      const ApproxLinearityReport report = report_from_json(read_json_file(report_file));
      const auto phi = read_vectors(phi_files);
      const FeasibilityResult result =
          lemma10_feasibility(report, phi, report.a0_prefix, static_cast<std::size_t>(config.elimination_budget));
      json j{{"satisfiable", result.satisfiable}, {"prefix", report.a0_prefix}};
      if (result.witness) {
        j["coefficients"] = to_json(*result.witness);
      }
      print(out, j);
    } else if (*descend) {
      const Subspace h(read_vectors(phi_files));
      SearchParams params;
      params.prefix_depth = prefix_depth;
      params.rounding_denominator_bits = config.rounding_denominator_bits;
      params.precision_bits = bits;
      params.precision_cap = cap;
      const auto chain = minimizing_sequence(table, h, read_vector(x0_file), steps, params);
      print(out, chain_to_json(chain));
      if (static_cast<int>(chain.size()) < steps) {
        err << "descend: stopped after " << chain.size() << " of " << steps << " steps (budget)\n";
        return kExitBudget;
      }
    } else if (*verify) {
      const json document = read_json_file(cert_file);
      const auto chain = chain_from_json(document);
      VerificationResult result = verify_chain(table, chain);
      const auto objects = certificate_objects(document);
      for (std::size_t n = 0; n < objects.size(); ++n) {
        if (!digest_matches(objects[n])) {
          result.ok = false;
          result.failures.push_back("certificate " + std::to_string(n) + ": digest does not match contents");
        }
      }
      print(out, json{{"ok", result.ok}, {"certificates", chain.size()}, {"failures", result.failures}});
      if (!result.ok) {
        return kExitInvalid;
      }
    } else if (*demo) {
      DemoOptions options;
      options.codimension = static_cast<int>(demo_n.value_or(config.demo_n));
      options.rounding_denominator_bits = config.rounding_denominator_bits;
      options.prefix_depth = prefix_depth;
      print(out, run_demo(table, options));
    }
  } catch (const BudgetError& e) {
    err << "budget exhausted: " << e.what() << '\n';
    return kExitBudget;
  } catch (const HypothesisError& e) {
    err << "hypothesis violated: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const PreconditionError& e) {
    err << "precondition failed: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const InputError& e) {
    err << "invalid input: " << e.what() << '\n';
    return kExitInvalid;
  }
  return kExitOk;
}

} // namespace proxinorm
