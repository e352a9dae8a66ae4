#include "banditms/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

#include "banditms/balancing.hpp"
#include "banditms/baselines.hpp"
#include "banditms/fs_scb.hpp"
#include "banditms/ps_oful.hpp"

namespace banditms {

namespace {

constexpr std::uint64_t kNoiseTag = 0x6e6f697365ULL;
constexpr std::uint64_t kSampleTag = 0x73616d70ULL;

std::uint64_t label_hash(const std::string& label) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : label) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

double round_noise(const EnvInstance& env, int round) {
  Rng rng(mix_seed(env.seed, kNoiseTag, static_cast<std::uint64_t>(round)));
  return env.noise_sigma * rng.normal();
}

std::vector<Vec> action_list(const EnvInstance& env, int round) {
  std::vector<Vec> actions;
  actions.reserve(env.constants.K);
  for (int a = 0; a < env.constants.K; ++a) actions.push_back(env.action_feature(round, a));
  return actions;
}

AssumptionConstants constants_for(const EnvInstance& env, double delta, int M) {
  AssumptionConstants c = env.constants;
  c.delta = delta;
  c.M = M;
  return c;
}

std::vector<double> run_ps_policy(const EnvInstance& env, PsOful& policy) {
  std::vector<double> regrets(env.horizon());
  for (int t = 1; t <= env.horizon(); ++t) {
    const double eta = round_noise(env, t);
    if (env.unit_ball_actions) {
      const auto step = policy.step_unit_ball(
          [&](const Vec& phi) { return env.true_mean_feature(phi) + eta; });
      regrets[t - 1] = env.instantaneous_regret_feature(t, step.feature);
    } else {
      const auto actions = action_list(env, t);
      const auto step = policy.step(
          actions, [&](int a, const Vec&) { return env.true_mean(t, a) + eta; });
      regrets[t - 1] = env.instantaneous_regret(t, step.action);
    }
  }
  return regrets;
}

std::vector<double> run_ps_oful(const EnvInstance& env, double delta) {
  PsOful policy(constants_for(env, delta, static_cast<int>(env.ball_models.size())),
                env.ball_models);
  return run_ps_policy(env, policy);
}

std::vector<double> run_oracle_param(const EnvInstance& env, double delta) {
  PsOful policy(constants_for(env, delta, 1), {env.ball_models.at(env.true_model_index)});
  return run_ps_policy(env, policy);
}

std::vector<double> run_itl(const EnvInstance& env, double delta) {
  OfulItl policy(constants_for(env, delta, 1));
  std::vector<double> regrets(env.horizon());
  for (int t = 1; t <= env.horizon(); ++t) {
    const double eta = round_noise(env, t);
    if (env.unit_ball_actions) {
      const Vec phi = policy.propose_unit_ball();
      policy.update(phi, env.true_mean_feature(phi) + eta);
      regrets[t - 1] = env.instantaneous_regret_feature(t, phi);
    } else {
      const auto actions = action_list(env, t);
      const int a = policy.propose(actions);
      policy.update(actions[a], env.true_mean(t, a) + eta);
      regrets[t - 1] = env.instantaneous_regret(t, a);
    }
  }
  return regrets;
}

std::vector<double> run_fs_scb(const EnvInstance& env, double delta, const std::string& label,
                               bool oracle) {
  std::vector<FeatureMapModel> maps;
  int M = 0;
  if (oracle) {
    maps = {env.feature_maps.at(env.true_model_index)};
    M = 1;
  } else {
    maps = env.feature_maps;
    M = static_cast<int>(maps.size());
  }
  FsScb policy(constants_for(env, delta, M), std::move(maps));
  Rng sampler(mix_seed(env.seed, label_hash(label), kSampleTag));
  std::vector<double> regrets(env.horizon());
  for (int t = 1; t <= env.horizon(); ++t) {
    const double eta = round_noise(env, t);
    const auto step =
        policy.step(0, [&](int a) { return env.true_mean(t, a) + eta; }, sampler);
    regrets[t - 1] = env.instantaneous_regret(t, step.action);
  }
  return regrets;
}

std::vector<double> run_oracle_oful(const EnvInstance& env, double delta) {
  OfulItl policy(constants_for(env, delta, 1));
  std::vector<double> regrets(env.horizon());
  for (int t = 1; t <= env.horizon(); ++t) {
    const double eta = round_noise(env, t);
    const auto actions = action_list(env, t);
    const int a = policy.propose(actions);
    policy.update(actions[a], env.true_mean(t, a) + eta);
    regrets[t - 1] = env.instantaneous_regret(t, a);
  }
  return regrets;
}

/// Single-model PS-OFUL wrapped as a balancing base.
class PsOfulBase final : public BaseAlgorithm {
 public:
  PsOfulBase(const AssumptionConstants& constants, BallModel model)
      : policy_(constants, {std::move(model)}) {}

  int propose(std::span<const Vec> actions) override {
    const int a = policy_.propose(actions);
    pending_ = actions[a];
    return a;
  }

  void update(double reward) override {
    policy_.ingest(pending_, reward);
  }

 private:
  PsOful policy_;
  Vec pending_;
};

std::vector<double> run_balancer(const EnvInstance& env, double delta) {
  if (env.unit_ball_actions)
    throw std::invalid_argument("regret-balancing requires a finite action set");
  const int M = static_cast<int>(env.ball_models.size());
  const AssumptionConstants base_constants = constants_for(env, delta, 1);
  std::vector<std::unique_ptr<BaseAlgorithm>> bases;
  bases.reserve(M);
  double max_bc = 0.0;
  for (const auto& m : env.ball_models) {
    max_bc = std::max(max_bc, m.effective_radius());
    bases.push_back(std::make_unique<PsOfulBase>(base_constants, m));
  }
  const auto& c = env.constants;
  auto ref = [=](double n) {
    return reference_U(std::max(n, 1.0), c.d, c.L, c.R, M, delta, max_bc);
  };
  RegretBalancer balancer(std::move(bases), ref);
  std::vector<double> regrets(env.horizon());
  for (int t = 1; t <= env.horizon(); ++t) {
    const double eta = round_noise(env, t);
    const auto actions = action_list(env, t);
    const auto step = balancer.step(
        actions, [&](int a, const Vec&) { return env.true_mean(t, a) + eta; });
    regrets[t - 1] = env.instantaneous_regret(t, step.action);
  }
  return regrets;
}

EnvInstance make_env(const ExperimentConfig& config, std::uint64_t instance_seed, double delta) {
  auto get = [&](const std::string& key, const std::string& fallback) {
    auto it = config.env_overrides.find(key);
    return it == config.env_overrides.end() ? fallback : it->second;
  };
  const std::string kind = get("kind", "ball");
  EnvInstance env;
  if (kind == "ball") {
    BallEnvOptions opts;
    opts.T = config.T;
    opts.K = std::stoi(get("K", "50"));
    opts.unit_ball = get("unit_ball", "0") == "1";
    env = gen_ball_env(parse_ball_variant(get("variant", "overlapping")), instance_seed, opts);
  } else if (kind == "feature") {
    FeatureEnvOptions opts;
    opts.T = config.T;
    const std::string interp = get("noise_interp", "variance");
    if (interp == "variance")
      opts.noise_interp = NoiseInterpretation::Variance;
    else if (interp == "stddev")
      opts.noise_interp = NoiseInterpretation::Stddev;
    else
      throw std::invalid_argument("unknown noise_interp: " + interp);
    env = gen_feature_env(instance_seed, opts);
  } else {
    throw std::invalid_argument("unknown env kind: " + kind);
  }
  const auto sigma_override = config.env_overrides.find("noise_sigma");
  if (sigma_override != config.env_overrides.end()) {
    const double sigma = std::stod(sigma_override->second);
    if (sigma < 0) throw std::invalid_argument("noise_sigma override must be nonnegative");
    env.noise_sigma = sigma;
  }
  env.constants.delta = delta;
  return env;
}

}  // namespace

double ExperimentConfig::resolve_delta() const {
  if (delta_rule == "one-over-T") return std::min(1.0 / T, 0.25);
  if (delta_rule.rfind("fixed:", 0) == 0) {
    const double v = std::stod(delta_rule.substr(6));
    if (!(v > 0.0)) throw std::invalid_argument("delta_rule: fixed delta must be positive");
    return std::min(v, 0.25);
  }
  throw std::invalid_argument("unknown delta_rule: " + delta_rule);
}

void ExperimentConfig::validate() const {
  if (T < 1) throw std::invalid_argument("config: horizon must be >= 1");
  if (n_instances < 1) throw std::invalid_argument("config: instances must be >= 1");
  if (parallelism < 1) throw std::invalid_argument("config: parallelism must be >= 1");
  if (algorithms.empty()) throw std::invalid_argument("config: no algorithms configured");
  const auto known = known_algorithms();
  for (const auto& a : algorithms)
    if (std::find(known.begin(), known.end(), a) == known.end())
      throw std::invalid_argument("config: unknown algorithm label " + a);
  resolve_delta();
}

std::vector<std::string> known_experiments() {
  return {"fig1-topleft", "fig1-topright", "fig1-bottomleft", "fig1-bottomright", "custom"};
}

std::vector<std::string> known_algorithms() {
  return {"ps-oful", "fs-scb", "itl", "oracle", "oracle-oful", "regret-balancing"};
}

ExperimentConfig experiment_preset(const std::string& name) {
  ExperimentConfig cfg;
  cfg.experiment = name;
  if (name == "fig1-topleft") {
    cfg.T = 1000;
    cfg.algorithms = {"oracle", "ps-oful", "itl"};
    cfg.env_overrides = {{"kind", "ball"}, {"variant", "overlapping"}};
  } else if (name == "fig1-topright") {
    cfg.T = 1000;
    cfg.algorithms = {"oracle", "ps-oful", "itl"};
    cfg.env_overrides = {{"kind", "ball"}, {"variant", "disjoint"}};
  } else if (name == "fig1-bottomleft") {
    cfg.T = 1000;
    cfg.algorithms = {"oracle", "fs-scb"};
    cfg.env_overrides = {{"kind", "feature"}};
  } else if (name == "fig1-bottomright") {
    cfg.T = 100;
    cfg.algorithms = {"ps-oful", "regret-balancing"};
    cfg.env_overrides = {{"kind", "ball"}, {"variant", "balancing20"}};
  } else if (name == "custom") {
    // caller fills everything
  } else {
    throw std::invalid_argument("unknown experiment: " + name);
  }
  return cfg;
}

std::vector<double> run_policy_on_instance(const std::string& algorithm, const EnvInstance& env,
                                           double delta) {
  const bool feature_env = env.kind == EnvKind::FeatureSelection;
  if (algorithm == "ps-oful") {
    if (feature_env) throw std::invalid_argument("ps-oful requires a parameter-selection env");
    return run_ps_oful(env, delta);
  }
  if (algorithm == "itl") {
    if (feature_env) throw std::invalid_argument("itl requires a parameter-selection env");
    return run_itl(env, delta);
  }
  if (algorithm == "oracle")
    return feature_env ? run_fs_scb(env, delta, algorithm, /*oracle=*/true)
                       : run_oracle_param(env, delta);
  if (algorithm == "oracle-oful") {
    if (!feature_env) throw std::invalid_argument("oracle-oful requires a feature-selection env");
    return run_oracle_oful(env, delta);
  }
  if (algorithm == "fs-scb") {
    if (!feature_env) throw std::invalid_argument("fs-scb requires a feature-selection env");
    return run_fs_scb(env, delta, algorithm, /*oracle=*/false);
  }
  if (algorithm == "regret-balancing") {
    if (feature_env)
      throw std::invalid_argument("regret-balancing requires a parameter-selection env");
    return run_balancer(env, delta);
  }
  throw std::invalid_argument("unknown algorithm label " + algorithm);
}

RunSummary run_experiment(const ExperimentConfig& config) {
  config.validate();
  const double delta = config.resolve_delta();

  RunSummary summary;
  summary.n_instances_requested = config.n_instances;
  try {
    const EnvInstance probe = make_env(config, config.master_seed, delta);
    int below_one = 0;
    for (const auto& m : probe.ball_models) {
      bool warn = false;
      lambda_for_model(probe.constants.T, m.radius, m.center_error, &warn);
      below_one += warn ? 1 : 0;
    }
    if (below_one > 0)
      summary.diagnostics.push_back(
          "note: lambda_i < 1 for " + std::to_string(below_one) + " of " +
          std::to_string(probe.ball_models.size()) +
          " models; outside the regime the regret analysis assumes");
  } catch (const std::exception&) {
    // instance generation problems surface per instance below
  }

  struct InstanceResult {
    bool failed = false;
    std::string diagnostic;
    std::vector<std::vector<double>> per_algorithm;
  };
  std::vector<InstanceResult> results(config.n_instances);

  std::atomic<int> next{0};
  auto worker = [&] {
    while (true) {
      const int i = next.fetch_add(1);
      if (i >= config.n_instances) break;
      auto& out = results[i];
      try {
        const EnvInstance env = make_env(config, config.master_seed + i, delta);
        out.per_algorithm.reserve(config.algorithms.size());
        for (const auto& algorithm : config.algorithms)
          out.per_algorithm.push_back(run_policy_on_instance(algorithm, env, delta));
      } catch (const std::exception& e) {
        out.failed = true;
        out.diagnostic = "instance " + std::to_string(i) + ": " + e.what();
        out.per_algorithm.clear();
      }
    }
  };

  const int n_threads = std::max(1, std::min(config.parallelism, config.n_instances));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  std::vector<RegretRecord> records;
  for (int i = 0; i < config.n_instances; ++i) {
    if (results[i].failed) {
      ++summary.n_failed;
      summary.diagnostics.push_back(results[i].diagnostic);
      continue;
    }
    for (std::size_t k = 0; k < config.algorithms.size(); ++k) {
      const auto& regrets = results[i].per_algorithm[k];
      for (int t = 1; t <= static_cast<int>(regrets.size()); ++t)
        records.push_back({i, t, config.algorithms[k], regrets[t - 1], 0.0});
    }
  }
  if (summary.n_failed < config.n_instances) summary.table = RegretTable::accumulate(records);

  std::ostringstream manifest;
  manifest << "experiment = " << config.experiment << '\n';
  manifest << "T = " << config.T << '\n';
  manifest << "n_instances = " << config.n_instances << '\n';
  manifest << "master_seed = " << config.master_seed << '\n';
  manifest << "delta_rule = " << config.delta_rule << '\n';
  char delta_buf[32];
  std::snprintf(delta_buf, sizeof(delta_buf), "%.17g", delta);
  manifest << "delta = " << delta_buf << '\n';
  manifest << "algorithms = ";
  for (std::size_t k = 0; k < config.algorithms.size(); ++k)
    manifest << (k ? "," : "") << config.algorithms[k];
  manifest << '\n';
  manifest << "parallelism = " << config.parallelism << '\n';
  for (const auto& [key, value] : config.env_overrides)
    manifest << "env." << key << " = " << value << '\n';
  manifest << "instance_seeds =";
  for (int i = 0; i < config.n_instances; ++i) manifest << ' ' << config.master_seed + i;
  manifest << '\n';
  manifest << "n_failed = " << summary.n_failed << '\n';
  summary.manifest = manifest.str();
  return summary;
}

ExperimentConfig apply_config_line(ExperimentConfig cfg, const std::string& key,
                                   const std::string& value) {
  if (key == "experiment") {
    // handled by the caller (preset applied first)
  } else if (key == "horizon" || key == "T") {
    cfg.T = std::stoi(value);
  } else if (key == "instances") {
    cfg.n_instances = std::stoi(value);
  } else if (key == "seed") {
    cfg.master_seed = std::stoull(value);
  } else if (key == "delta_rule") {
    cfg.delta_rule = value;
  } else if (key == "algorithms") {
    cfg.algorithms.clear();
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ','))
      if (!item.empty()) cfg.algorithms.push_back(item);
  } else if (key == "out") {
    cfg.output_dir = value;
  } else if (key == "parallel") {
    cfg.parallelism = std::stoi(value);
  } else if (key.rfind("env.", 0) == 0) {
    cfg.env_overrides[key.substr(4)] = value;
  } else {
    throw std::invalid_argument("unknown config key: " + key);
  }
  return cfg;
}

ExperimentConfig parse_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path.string());
  std::vector<std::pair<std::string, std::string>> entries;
  std::string line;
  auto trim = [](std::string s) {
    const auto a = s.find_first_not_of(" \t\r");
    const auto b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? std::string{} : s.substr(a, b - a + 1);
  };
  while (std::getline(in, line)) {
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line is not key = value: " + stripped);
    entries.emplace_back(trim(stripped.substr(0, eq)), trim(stripped.substr(eq + 1)));
  }

  ExperimentConfig cfg;
  for (const auto& [key, value] : entries)
    if (key == "experiment") cfg = experiment_preset(value);
  for (const auto& [key, value] : entries) cfg = apply_config_line(std::move(cfg), key, value);
  return cfg;
}

RunSummary run_and_emit(const ExperimentConfig& config) {
  RunSummary summary = run_experiment(config);
  const auto dir = config.output_dir / config.experiment;
  std::filesystem::create_directories(dir);
  if (!summary.table.empty()) {
    write_csv(summary.table, dir / "regret.csv");
    emit_plot(summary.table, dir / "regret.svg");
  }
  std::ofstream manifest(dir / "manifest");
  manifest << summary.manifest;
  return summary;
}

}  // namespace banditms
