#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "banditms/env.hpp"
#include "banditms/types.hpp"

namespace banditms {

struct ExperimentConfig {
  std::string experiment = "custom";
  int T = 1000;
  int n_instances = 50;
  std::uint64_t master_seed = 0;
  std::string delta_rule = "one-over-T";  // or "fixed:<value>"
  std::vector<std::string> algorithms;
  std::map<std::string, std::string> env_overrides;
  std::filesystem::path output_dir = "out";
  int parallelism = 1;

  /// delta per the rule, clamped into (0, 1/4] as the radius formulas require.
  double resolve_delta() const;
  void validate() const;
};

/// Experiment presets reproducing the four simulation configurations.
ExperimentConfig experiment_preset(const std::string& name);
std::vector<std::string> known_experiments();
std::vector<std::string> known_algorithms();

/// Flat key = value config file; keys mirror the CLI flags.
ExperimentConfig parse_config_file(const std::filesystem::path& path);
ExperimentConfig apply_config_line(ExperimentConfig cfg, const std::string& key,
                                   const std::string& value);

struct RunSummary {
  RegretTable table;
  int n_instances_requested = 0;
  int n_failed = 0;
  std::vector<std::string> diagnostics;
  std::string manifest;
};

/// Runs every configured algorithm on n seeded instances and aggregates
/// per-round cumulative regret. Instances run in parallel up to
/// config.parallelism; results are independent of the schedule.
RunSummary run_experiment(const ExperimentConfig& config);

/// Per-round instantaneous pseudo-regrets of one algorithm on one instance.
std::vector<double> run_policy_on_instance(const std::string& algorithm, const EnvInstance& env,
                                           double delta);

void write_csv(const RegretTable& table, const std::filesystem::path& path);
void emit_plot(const RegretTable& table, const std::filesystem::path& path);

struct CsvRow {
  std::string algorithm;
  int round = 0;
  double mean_cum_regret = 0.0;
  double std_cum_regret = 0.0;
  int n_instances = 0;
};
std::vector<CsvRow> read_regret_csv(const std::filesystem::path& path);

/// Runs the experiment and writes regret.csv, regret.svg and manifest under
/// <output_dir>/<experiment>/. Returns the summary.
RunSummary run_and_emit(const ExperimentConfig& config);

}  // namespace banditms
