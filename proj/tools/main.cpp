// ellipsoid-entropy: exact ellipsoidal codebook counts, entropy-bound
// evaluation, parameter sweeps, and the verification suites.
//
// Exit codes: 0 success, 1 invariant violation, 2 bad configuration.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "ellipsoid_entropy/experiment.hpp"
#include "ellipsoid_entropy/io.hpp"

namespace ee = ellipsoid_entropy;

namespace {

struct CommonArgs {
  std::string config_path;
  std::string mode;
  std::uint64_t budget = 0;
  std::int64_t seed = -1;
  std::string out_path;
  std::string format = "csv";
  bool timings = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "experiment config (JSON)");
  cmd->add_option("--mode", args.mode, "certified | empirical | both")
      ->check(CLI::IsMember({"certified", "empirical", "both"}));
  cmd->add_option("--budget", args.budget, "enumeration budget override");
  cmd->add_option("--seed", args.seed, "RNG seed override");
  cmd->add_option("--out", args.out_path, "output file (default: stdout)");
  cmd->add_option("--format", args.format, "csv | json")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_flag("--timings", args.timings, "include runtime_ms in the output");
}

ee::experiment::ExperimentConfig load_config(const CommonArgs& args) {
  ee::experiment::ExperimentConfig config;
  if (!args.config_path.empty())
    config = ee::experiment::ExperimentConfig::from_file(args.config_path);
  if (!args.mode.empty()) {
    config.mode = args.mode == "certified" ? ee::experiment::RunMode::certified
                  : args.mode == "empirical" ? ee::experiment::RunMode::empirical
                                             : ee::experiment::RunMode::both;
  }
  if (args.budget > 0) config.count_budget = args.budget;
  if (args.seed >= 0) config.seed = static_cast<std::uint64_t>(args.seed);
  return config;
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
  } else {
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot write " + out_path);
    out << text;
  }
}

int emit_run(const ee::experiment::RunOutput& out, const CommonArgs& args) {
  if (args.format == "json") {
    emit(ee::experiment::output_to_json(out, args.timings).dump(2), args.out_path);
  } else {
    emit(ee::experiment::rows_to_csv(out, args.timings), args.out_path);
  }
  return out.any_violation ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"worst-case quantization codebook counts and entropy bounds"};
  app.require_subcommand(1);

  CommonArgs count_args, bound_args, sweep_args, verify_args;
  std::string reports_path;
  std::string bessel_samples_path;

  CLI::App* cmd_count =
      app.add_subcommand("count", "exact codebook size tau(k) per instance");
  add_common(cmd_count, count_args);

  CLI::App* cmd_bound =
      app.add_subcommand("bound", "entropy-bound reports and residuals");
  add_common(cmd_bound, bound_args);
  cmd_bound->add_option("--reports", reports_path,
                        "also write full bound reports (JSON) here");

  CLI::App* cmd_sweep = app.add_subcommand(
      "sweep", "bound rows across instances, with alternate-regime columns");
  add_common(cmd_sweep, sweep_args);

  CLI::App* cmd_verify =
      app.add_subcommand("verify", "run the invariant verification suites");
  add_common(cmd_verify, verify_args);
  cmd_verify->add_option("--bessel-samples", bessel_samples_path,
                         "write (nu,x,sqrt(x)|J|,bound) samples CSV here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (cmd_count->parsed()) {
      const auto config = load_config(count_args);
      return emit_run(ee::experiment::run_count(config), count_args);
    }
    if (cmd_bound->parsed()) {
      const auto config = load_config(bound_args);
      const auto out = ee::experiment::run_bound(config);
      if (!reports_path.empty()) {
        nlohmann::json reports = nlohmann::json::array();
        for (const auto& rep : out.reports)
          reports.push_back(ee::io::report_to_json(rep));
        emit(reports.dump(2), reports_path);
      }
      return emit_run(out, bound_args);
    }
    if (cmd_sweep->parsed()) {
      const auto config = load_config(sweep_args);
      return emit_run(ee::experiment::run_sweep(config), sweep_args);
    }
    if (cmd_verify->parsed()) {
      const auto config = load_config(verify_args);
      ee::experiment::VerifyOptions opts;
      opts.bessel_samples_path = bessel_samples_path;
      const auto suites = ee::experiment::run_verify(config, opts);
      bool all = true;
      std::string lines;
      for (const auto& s : suites) {
        all = all && s.pass;
        lines += std::string(s.pass ? "[PASS] " : "[FAIL] ") + s.name;
        if (!s.detail.empty()) lines += "  (" + s.detail + ")";
        lines += '\n';
      }
      std::cerr << lines;
      if (verify_args.format == "json" || !verify_args.out_path.empty()) {
        emit(ee::experiment::verify_to_json(suites).dump(2), verify_args.out_path);
      }
      return all ? 0 : 1;
    }
  } catch (const ee::experiment::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
