#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "banditms/harness.hpp"

namespace {

// exit codes: 0 success, 1 config error, 2 runtime failure above tolerance
constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kRuntimeError = 2;
constexpr double kFailureTolerance = 0.05;

struct RunFlags {
  std::string experiment;
  std::string config_file;
  int horizon = -1;
  int instances = -1;
  long long seed = -1;
  std::string algorithms;
  std::string out;
  std::string delta_rule;
  int parallel = -1;
  std::vector<std::string> env;
};

banditms::ExperimentConfig resolve(const RunFlags& flags) {
  if (!flags.experiment.empty() && !flags.config_file.empty())
    throw std::invalid_argument(
        "--experiment and --config are exclusive; put `experiment = <name>` in the file");
  banditms::ExperimentConfig cfg;
  if (!flags.config_file.empty()) cfg = banditms::parse_config_file(flags.config_file);
  if (!flags.experiment.empty()) cfg = banditms::experiment_preset(flags.experiment);
  if (flags.horizon > 0) cfg.T = flags.horizon;
  if (flags.instances > 0) cfg.n_instances = flags.instances;
  if (flags.seed >= 0) cfg.master_seed = static_cast<std::uint64_t>(flags.seed);
  if (!flags.algorithms.empty()) cfg = banditms::apply_config_line(cfg, "algorithms", flags.algorithms);
  if (!flags.out.empty()) cfg.output_dir = flags.out;
  if (!flags.delta_rule.empty()) cfg.delta_rule = flags.delta_rule;
  if (flags.parallel > 0) cfg.parallelism = flags.parallel;
  for (const auto& kv : flags.env) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("--env expects key=value, got: " + kv);
    cfg.env_overrides[kv.substr(0, eq)] = kv.substr(eq + 1);
  }
  return cfg;
}

void print_config(const banditms::ExperimentConfig& cfg) {
  std::cout << "experiment = " << cfg.experiment << '\n'
            << "horizon = " << cfg.T << '\n'
            << "instances = " << cfg.n_instances << '\n'
            << "seed = " << cfg.master_seed << '\n'
            << "delta_rule = " << cfg.delta_rule << '\n'
            << "delta = " << cfg.resolve_delta() << '\n'
            << "parallel = " << cfg.parallelism << '\n'
            << "out = " << cfg.output_dir.string() << '\n';
  std::cout << "algorithms = ";
  for (std::size_t i = 0; i < cfg.algorithms.size(); ++i)
    std::cout << (i ? "," : "") << cfg.algorithms[i];
  std::cout << '\n';
  for (const auto& [k, v] : cfg.env_overrides) std::cout << "env." << k << " = " << v << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Model-selection linear-bandit experiment runner"};
  app.require_subcommand(1);

  RunFlags flags;
  auto* run = app.add_subcommand("run", "Run an experiment and emit csv/svg/manifest");
  run->add_option("--experiment", flags.experiment, "Experiment preset name");
  run->add_option("--config", flags.config_file, "Flat key = value config file");
  run->add_option("--horizon", flags.horizon, "Rounds per instance");
  run->add_option("--instances", flags.instances, "Number of seeded instances");
  run->add_option("--seed", flags.seed, "Master seed");
  run->add_option("--algorithms", flags.algorithms, "Comma-separated algorithm labels");
  run->add_option("--out", flags.out, "Output directory");
  run->add_option("--delta-rule", flags.delta_rule, "one-over-T or fixed:<value>");
  run->add_option("--parallel", flags.parallel, "Instance-level parallelism");
  run->add_option("--env", flags.env, "Environment override key=value (repeatable)");

  auto* list = app.add_subcommand("list-experiments", "List experiment presets");

  std::string validate_path;
  auto* validate = app.add_subcommand("validate-config", "Parse and resolve a config file");
  validate->add_option("file", validate_path, "Config file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (list->parsed()) {
      for (const auto& name : banditms::known_experiments()) std::cout << name << '\n';
      return kOk;
    }
    if (validate->parsed()) {
      const auto cfg = banditms::parse_config_file(validate_path);
      cfg.validate();
      print_config(cfg);
      return kOk;
    }
    // run
    banditms::ExperimentConfig cfg;
    try {
      cfg = resolve(flags);
      cfg.validate();
    } catch (const std::exception& e) {
      std::cerr << "config error: " << e.what() << '\n';
      return kConfigError;
    }
    const auto summary = banditms::run_and_emit(cfg);
    for (const auto& d : summary.diagnostics) std::cerr << "warning: " << d << '\n';
    std::cout << "experiment " << cfg.experiment << ": " << summary.n_instances_requested
              << " instances, " << summary.n_failed << " failed\n";
    std::cout << "outputs in " << (cfg.output_dir / cfg.experiment).string() << '\n';
    const double failure_rate =
        static_cast<double>(summary.n_failed) / summary.n_instances_requested;
    return failure_rate > kFailureTolerance ? kRuntimeError : kOk;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
}
