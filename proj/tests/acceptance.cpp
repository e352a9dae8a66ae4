// Acceptance suite: one check per published criterion, each printed as a
// single [PASS]/[FAIL] line with its measured values and elapsed time.
// The process exit code is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "banditms/balancing.hpp"
#include "banditms/env.hpp"
#include "banditms/fs_scb.hpp"
#include "banditms/harness.hpp"
#include "banditms/ps_oful.hpp"
#include "banditms/regressor.hpp"
#include "banditms/rng.hpp"
#include "banditms/sq_aggregator.hpp"

using namespace banditms;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

double pooled_se(const std::vector<double>& a, const std::vector<double>& b) {
  auto var = [](const std::vector<double>& v) {
    double mean = 0;
    for (double x : v) mean += x;
    mean /= v.size();
    double ss = 0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return ss / (v.size() - 1);
  };
  return std::sqrt(var(a) / a.size() + var(b) / b.size());
}

double mean_of(const std::vector<double>& v) {
  double m = 0;
  for (double x : v) m += x;
  return m / v.size();
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// ---------------------------------------------------------------------------
// criterion 1: incremental least squares vs direct normal-equation solves

Outcome criterion_least_squares() {
  Rng rng(101);
  double worst = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const int d = 1 + static_cast<int>(rng.uniform_int(5));
    const int t = 1 + static_cast<int>(rng.uniform_int(50));
    const double lambda = rng.uniform(0.1, 8.0);
    const Vec bias = rng.normal_vector(d);
    Regressor reg(bias, lambda);
    Mat V = lambda * Mat::Identity(d, d);
    Vec rhs = lambda * bias;
    for (int s = 0; s < t; ++s) {
      const Vec phi = rng.normal_vector(d);
      const double y = rng.normal();
      reg.update(phi, y);
      V += phi * phi.transpose();
      rhs += phi * y;
    }
    const Vec direct = V.ldlt().solve(rhs);
    worst = std::max(worst, (reg.coeffs() - direct).cwiseAbs().maxCoeff());
  }
  Outcome out;
  out.pass = worst <= 1e-8;
  std::ostringstream ss;
  ss << "max |incremental - direct| = " << worst << " over 500 sequences (tol 1e-8)";
  out.detail = ss.str();
  return out;
}

// ---------------------------------------------------------------------------
// criterion 2: aggregator regret bound and substitution feasibility

Outcome criterion_aggregator_bound() {
  Rng rng(102);
  const int kMs[] = {1, 2, 8, 64};
  double worst_slack = -1e18;
  double worst_m1 = -1e18;
  int feasibility_violations = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int m = kMs[trial % 4];
    const int horizon = 1 + static_cast<int>(rng.uniform_int(1000));
    const int style = trial % 3;  // random / extreme experts / adversarial y
    SqAggregator agg(m, 0.0, 1.0);
    std::vector<AggregatorRound> trace;
    trace.reserve(horizon);
    for (int t = 0; t < horizon; ++t) {
      AggregatorRound round;
      round.expert_preds.resize(m);
      for (auto& p : round.expert_preds)
        p = style == 1 ? std::round(rng.uniform01()) : rng.uniform01();
      try {
        round.agg_pred = agg.predict(round.expert_preds);
      } catch (const std::logic_error&) {
        ++feasibility_violations;
        round.agg_pred = 0.5;
      }
      round.y = style == 2 ? (round.agg_pred >= 0.5 ? 0.0 : 1.0) : rng.uniform01();
      agg.update(round.expert_preds, round.y);
      trace.push_back(std::move(round));
    }
    const double regret = empirical_sq_regret(trace);
    const double bound = 2.0 * std::log(m);  // ell = 1
    worst_slack = std::max(worst_slack, regret - bound);
    if (m == 1) worst_m1 = std::max(worst_m1, regret);
  }
  Outcome out;
  out.pass = worst_slack <= 1e-12 && worst_m1 <= 1e-12 && feasibility_violations == 0;
  std::ostringstream ss;
  ss << "max (regret - 2 l^2 log M) = " << worst_slack << ", max M=1 regret = " << worst_m1
     << ", feasibility violations = " << feasibility_violations;
  out.detail = ss.str();
  return out;
}

// ---------------------------------------------------------------------------
// criterion 3: confidence-set coverage on the overlapping-ball environment

Outcome criterion_coverage() {
  const int n_instances = 200;
  const int T = 300;
  const double delta = 0.1;
  int failures = 0;
  for (int i = 0; i < n_instances; ++i) {
    const EnvInstance env = gen_ball_env(BallVariant::Overlapping, 9000 + i, {T, 50, false});
    AssumptionConstants constants = env.constants;
    constants.delta = delta;
    PsOful policy(constants, env.ball_models);
    double error_sum = 0;
    bool covered = true;
    for (int t = 1; t <= T; ++t) {
      Rng noise(mix_seed(env.seed, 0x6e6f697365ULL, t));
      std::vector<Vec> actions;
      actions.reserve(50);
      for (int a = 0; a < 50; ++a) actions.push_back(env.action_feature(t, a));
      const auto step = policy.step(actions, [&](int a, const Vec&) {
        return env.true_mean(t, a) + env.noise_sigma * noise.normal();
      });
      const double err = step.oracle_prediction - step.feature.dot(env.theta_star);
      error_sum += err * err;
      const double U = compute_Ut(t, T, constants.d, constants.L, constants.R, delta,
                                  policy.max_bc());
      const double RSq = compute_RSq_ps(t, T, constants.d, constants.L, constants.R,
                                        constants.G, constants.M, delta, policy.max_bc());
      if (error_sum > confidence_radius(delta, U, RSq, constants.R)) {
        covered = false;
        break;
      }
    }
    if (!covered) ++failures;
  }
  const double rate = static_cast<double>(failures) / n_instances;
  const double tolerance = delta + 3.0 * std::sqrt(delta * (1 - delta) / n_instances);
  Outcome out;
  out.pass = rate <= tolerance;
  std::ostringstream ss;
  ss << "coverage failure rate = " << rate << " over " << n_instances
     << " instances (tolerance " << tolerance << ")";
  out.detail = ss.str();
  return out;
}

// ---------------------------------------------------------------------------
// criterion 4: figure 1 top row orderings

struct BallRunStats {
  std::vector<double> oracle, ps, itl;
};

BallRunStats run_top_row(const std::string& preset, const fs::path& out_dir) {
  ExperimentConfig cfg = experiment_preset(preset);
  cfg.output_dir = out_dir;
  cfg.parallelism = 2;
  const RunSummary summary = run_and_emit(cfg);
  BallRunStats stats;
  stats.oracle = summary.table.cumulative_at("oracle", cfg.T);
  stats.ps = summary.table.cumulative_at("ps-oful", cfg.T);
  stats.itl = summary.table.cumulative_at("itl", cfg.T);
  return stats;
}

Outcome criterion_top_row(const fs::path& work_dir) {
  const auto overlap = run_top_row("fig1-topleft", work_dir);
  const auto disjoint = run_top_row("fig1-topright", work_dir);

  Outcome out;
  std::ostringstream ss;
  auto check_order = [&](const char* name, const BallRunStats& s) {
    const double o = mean_of(s.oracle), p = mean_of(s.ps), i = mean_of(s.itl);
    const double se_op = pooled_se(s.oracle, s.ps);
    const double se_pi = pooled_se(s.ps, s.itl);
    const bool oracle_below_ps = p - o > se_op;
    const bool ps_below_itl = i - p > se_pi;
    out.pass = out.pass && oracle_below_ps && ps_below_itl;
    ss << name << ": oracle " << o << ", ps-oful " << p << ", itl " << i << " (se " << se_op
       << "/" << se_pi << ") order " << (oracle_below_ps && ps_below_itl ? "ok" : "VIOLATED")
       << "; ";
  };
  check_order("overlapping", overlap);
  check_order("disjoint", disjoint);

  const double ratio_overlap = (mean_of(overlap.ps) - mean_of(overlap.oracle)) /
                               (mean_of(overlap.itl) - mean_of(overlap.oracle));
  const double ratio_disjoint = (mean_of(disjoint.ps) - mean_of(disjoint.oracle)) /
                                (mean_of(disjoint.itl) - mean_of(disjoint.oracle));
  const bool ratio_ok = ratio_disjoint < ratio_overlap;
  out.pass = out.pass && ratio_ok;
  ss << "gap ratios disjoint " << ratio_disjoint << " vs overlapping " << ratio_overlap << " ("
     << (ratio_ok ? "ok" : "VIOLATED") << ")";
  out.detail = ss.str();
  return out;
}

// ---------------------------------------------------------------------------
// criterion 5: figure 1 bottom left (feature selection)

Outcome criterion_bottom_left(const fs::path& work_dir) {
  ExperimentConfig cfg = experiment_preset("fig1-bottomleft");
  cfg.output_dir = work_dir;
  cfg.parallelism = 2;
  const RunSummary summary = run_and_emit(cfg);
  const int T = cfg.T;

  auto decile_ratio = [&](const std::string& algo) {
    const double first = summary.table.at(algo, T / 10).mean / (T / 10);
    const double last =
        (summary.table.at(algo, T).mean - summary.table.at(algo, T - T / 10).mean) / (T / 10);
    return std::make_pair(first, last);
  };
  const double fs_final = summary.table.at("fs-scb", T).mean;
  const double oracle_final = summary.table.at("oracle", T).mean;
  const double factor = 3.0 * std::sqrt(std::log(10.0));
  const auto [fs_first, fs_last] = decile_ratio("fs-scb");
  const auto [or_first, or_last] = decile_ratio("oracle");

  const bool within_factor = fs_final <= factor * oracle_final;
  const bool fs_sublinear = fs_last < 0.5 * fs_first;
  const bool oracle_sublinear = or_last < 0.5 * or_first;
  Outcome out;
  out.pass = within_factor && fs_sublinear && oracle_sublinear;
  std::ostringstream ss;
  ss << "fs-scb " << fs_final << " vs oracle " << oracle_final << " (factor "
     << fs_final / oracle_final << ", limit " << factor << ", "
     << (within_factor ? "ok" : "VIOLATED") << "); decile ratios fs "
     << fs_last / fs_first << (fs_sublinear ? " ok" : " VIOLATED") << ", oracle "
     << or_last / or_first << (oracle_sublinear ? " ok" : " VIOLATED");
  out.detail = ss.str();
  return out;
}

// ---------------------------------------------------------------------------
// criterion 6: figure 1 bottom right (regret balancing comparison)

Outcome criterion_bottom_right(const fs::path& work_dir) {
  ExperimentConfig cfg = experiment_preset("fig1-bottomright");
  cfg.output_dir = work_dir;
  cfg.parallelism = 2;
  const RunSummary summary = run_and_emit(cfg);
  const auto ps = summary.table.cumulative_at("ps-oful", cfg.T);
  const auto bal = summary.table.cumulative_at("regret-balancing", cfg.T);
  const double se = pooled_se(ps, bal);
  const double gap = mean_of(bal) - mean_of(ps);
  Outcome out;
  out.pass = gap > se;
  std::ostringstream ss;
  ss << "ps-oful " << mean_of(ps) << " vs regret-balancing " << mean_of(bal) << " at t = "
     << cfg.T << " (gap " << gap << ", pooled se " << se << ")";
  out.detail = ss.str();
  return out;
}

// ---------------------------------------------------------------------------
// criterion 7: inverse-gap-weighting properties and sampler fidelity

Outcome criterion_igw() {
  Rng rng(107);
  double worst = 0;
  bool shape_ok = true;
  for (int trial = 0; trial < 10000; ++trial) {
    const int k = 1 + static_cast<int>(rng.uniform_int(100));
    std::vector<double> preds(k);
    for (auto& v : preds) v = rng.uniform(-2, 2);
    const double alpha = rng.uniform(1e-3, 1000.0);
    const auto p = igw_distribution(preds, alpha, k);
    std::size_t greedy = 0;
    double sum = 0;
    for (std::size_t a = 1; a < preds.size(); ++a)
      if (preds[a] > preds[greedy]) greedy = a;
    for (std::size_t a = 0; a < p.size(); ++a) {
      sum += p[a];
      if (p[a] < 0 || p[a] > 1) shape_ok = false;
      if (a != greedy && p[a] > 1.0 / k + 1e-15) shape_ok = false;
      if (p[a] > p[greedy] + 1e-15) shape_ok = false;
    }
    worst = std::max(worst, std::abs(sum - 1.0));
  }

  // sampler fidelity on representative distributions
  bool sampler_ok = true;
  double worst_z = 0;
  Rng sampler(1070);
  for (int scenario = 0; scenario < 3; ++scenario) {
    const int k = scenario == 0 ? 10 : scenario == 1 ? 25 : 50;
    std::vector<double> preds(k);
    for (auto& v : preds) v = sampler.uniform01();
    const double alpha = scenario == 0 ? 5.0 : scenario == 1 ? 50.0 : 400.0;
    const auto p = igw_distribution(preds, alpha, k);
    std::vector<int> counts(k, 0);
    const int n = 100000;
    for (int s = 0; s < n; ++s) ++counts[sampler.sample(p)];
    for (int a = 0; a < k; ++a) {
      const double sigma = std::sqrt(n * p[a] * (1 - p[a]));
      const double z = std::abs(counts[a] - n * p[a]) / std::max(sigma, 1e-9);
      worst_z = std::max(worst_z, z);
      if (z > 3.0) sampler_ok = false;
    }
  }

  Outcome out;
  out.pass = shape_ok && worst <= 1e-12 && sampler_ok;
  std::ostringstream ss;
  ss << "max |sum - 1| = " << worst << ", shape " << (shape_ok ? "ok" : "VIOLATED")
     << ", sampler max z = " << worst_z << " (limit 3)";
  out.detail = ss.str();
  return out;
}

// ---------------------------------------------------------------------------
// criterion 8: formula cross-checks against independent evaluations

namespace reference {

// Re-derived evaluators, written separately from the library versions.
double ut(double t, double T, double d, double L, double R, double delta, double bc) {
  const double z = std::log1p(t * T * (L * bc) * (L * bc) / d);
  double value = 1 + 2 / T + 8 * d * z;
  const double inner = 2 * std::sqrt(2.0) * R + std::sqrt(1 + 1 / T + 4 * d * z);
  value += 32 * R * R * std::log(inner / delta);
  return value;
}

double rsq_ps(double t, double T, double d, double L, double R, double G, double M, double delta,
              double bc) {
  const double z = std::log((1 + t * T * (L * bc) * (L * bc) / d) / delta);
  const double core = G * G + (L / std::sqrt(T)) * (L / std::sqrt(T)) +
                      2 * G * L / std::sqrt(T) + R * R * L * L * d * z;
  return 8 * std::log(M) * core;
}

double radius(double delta, double U, double RSq, double R) {
  const double tail = std::sqrt(2 * (1 + U) * (0.5 * std::log1p(U) - std::log(delta)));
  const double inner = std::sqrt(8.0) * R + std::sqrt(1 + RSq + U + 2 * R * tail);
  return 1 + 2 * RSq + 2 * U + 4 * R * tail + 32 * R * R * (std::log(inner) - std::log(delta));
}

double qt(double t, double d, double L, double R, double S, double delta,
          const std::vector<double>& lambdas) {
  double a = -1e300;
  for (double lam : lambdas)
    a = std::max(a, lam * S * S + 4 * d * std::log1p(t * L * L / (lam * d)));
  return 1 + 2 * a + 32 * R * R * std::log((std::sqrt(8.0) * R + std::sqrt(1 + a)) / delta);
}

double rsq_fs(double t, double d, double L, double R, double S, double G, double M, double delta,
              const std::vector<double>& lambdas) {
  double a = -1e300;
  for (double lam : lambdas)
    a = std::max(a, lam * S * S + d * std::log1p(t * L * L / (lam * d)));
  return 8 * std::log(M) * R * R * L * L * (G * G + a - std::log(delta));
}

double ref_u(double t, double d, double L, double R, double M, double delta, double bc) {
  const double q = std::log1p(t * t * (L * bc) * (L * bc) / d);
  return std::sqrt(d * q) +
         2 * d * R * L *
             std::sqrt(t * std::log(M) * std::log1p(t / d) * (q - std::log(delta)));
}

}  // namespace reference

Outcome criterion_formula_cross_checks() {
  Rng rng(108);
  double worst_rel = 0;
  auto track = [&](double got, double want) {
    const double rel = std::abs(got - want) / std::max(1.0, std::abs(want));
    worst_rel = std::max(worst_rel, rel);
  };

  // gamma and D_t agree pointwise on a 1000-point grid
  double worst_gap = 0;
  for (int i = 0; i < 1000; ++i) {
    const double delta = rng.uniform(1e-4, 0.25);
    const double u = rng.uniform(0, 200);
    const double rsq = rng.uniform(0, 500);
    const double r = rng.uniform(0, 2);
    const double g = confidence_radius(delta, u, rsq, r);
    const double d = prediction_error_bound(delta, u, rsq, r);
    worst_gap = std::max(worst_gap, std::abs(g - d));
    track(g, reference::radius(delta, u, rsq, r));
  }

  // monotonicity in t
  bool monotone = true;
  const std::vector<double> lambdas{1.0, 2.5};
  double last_u = -1, last_q = -1, last_rsq = -1, last_rsq_fs = -1;
  for (int t = 0; t <= 200; ++t) {
    const double u = compute_Ut(t, 200, 3, 1.2, 0.1, 0.01, 0.6);
    const double q = compute_Qt(std::max(t, 1), 3, 1.2, 0.1, 1.0, 0.01, lambdas);
    const double rs = compute_RSq_ps(t, 200, 3, 1.2, 0.1, 2.0, 5, 0.01, 0.6);
    const double rf = compute_RSq_fs(std::max(t, 1), 3, 1.2, 0.1, 1.0, 2.0, 5, 0.01, lambdas);
    if (u < last_u || q < last_q || rs < last_rsq || rf < last_rsq_fs) monotone = false;
    last_u = u;
    last_q = q;
    last_rsq = rs;
    last_rsq_fs = rf;
  }

  // every closed-form evaluator against its independent re-implementation
  for (int trial = 0; trial < 300; ++trial) {
    const double t = rng.uniform(0, 2000);
    const double T = t + rng.uniform(1, 2000);
    const double d = 1 + rng.uniform_int(10);
    const double L = rng.uniform(0.1, 4);
    const double R = rng.uniform(0, 1);
    const double G = rng.uniform(0, 8);
    const double S = rng.uniform(0, 7);
    const double M = 1 + rng.uniform_int(64);
    const double delta = rng.uniform(1e-4, 0.25);
    const double bc = rng.uniform(0.01, 1.2);
    std::vector<double> lams{rng.uniform(1.0, 3.0), rng.uniform(1.0, 3.0)};
    track(compute_Ut(t, T, d, L, R, delta, bc), reference::ut(t, T, d, L, R, delta, bc));
    track(compute_RSq_ps(t, T, d, L, R, G, M, delta, bc),
          reference::rsq_ps(t, T, d, L, R, G, M, delta, bc));
    track(compute_Qt(std::max(t, 1.0), d, L, R, S, delta, lams),
          reference::qt(std::max(t, 1.0), d, L, R, S, delta, lams));
    track(compute_RSq_fs(std::max(t, 1.0), d, L, R, S, G, M, delta, lams),
          reference::rsq_fs(std::max(t, 1.0), d, L, R, S, G, M, delta, lams));
    track(reference_U(std::max(t, 1.0), d, L, R, std::max(M, 2.0), delta, bc),
          reference::ref_u(std::max(t, 1.0), d, L, R, std::max(M, 2.0), delta, bc));
  }

  Outcome out;
  out.pass = worst_gap == 0.0 && monotone && worst_rel <= 1e-12;
  std::ostringstream ss;
  ss << "max |gamma - D_t| = " << worst_gap << ", monotone " << (monotone ? "ok" : "VIOLATED")
     << ", max relative error vs reference = " << worst_rel;
  out.detail = ss.str();
  return out;
}

// ---------------------------------------------------------------------------
// criterion 9: determinism of the experiment harness

Outcome criterion_determinism(const fs::path& work_dir) {
  auto run_once = [&](const std::string& tag, int parallelism) {
    ExperimentConfig cfg = experiment_preset("fig1-topleft");
    cfg.output_dir = work_dir / tag;
    cfg.parallelism = parallelism;
    run_and_emit(cfg);
    return slurp(work_dir / tag / "fig1-topleft" / "regret.csv");
  };
  const std::string serial_a = run_once("det_serial_a", 1);
  const std::string serial_b = run_once("det_serial_b", 1);
  const std::string parallel = run_once("det_parallel", 2);
  Outcome out;
  out.pass = !serial_a.empty() && serial_a == serial_b && serial_a == parallel;
  std::ostringstream ss;
  ss << "repeat " << (serial_a == serial_b ? "identical" : "DIFFERS") << ", serial vs parallel "
     << (serial_a == parallel ? "identical" : "DIFFERS") << " (" << serial_a.size()
     << " bytes)";
  out.detail = ss.str();
  return out;
}

}  // namespace

int main() {
  const fs::path work_dir = fs::temp_directory_path() / "banditms_acceptance";
  fs::remove_all(work_dir);
  fs::create_directories(work_dir);

  struct Criterion {
    int id;
    const char* name;
    double budget_seconds;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "least-squares oracle equivalence", 10, criterion_least_squares},
      {2, "aggregator regret bound", 30, criterion_aggregator_bound},
      {3, "confidence coverage", 300, criterion_coverage},
      {4, "figure 1 top row ordering", 600, [&] { return criterion_top_row(work_dir); }},
      {5, "figure 1 bottom left", 600, [&] { return criterion_bottom_left(work_dir); }},
      {6, "figure 1 bottom right", 300, [&] { return criterion_bottom_right(work_dir); }},
      {7, "inverse-gap-weighting properties", 30, criterion_igw},
      {8, "formula cross-checks", 5, criterion_formula_cross_checks},
      {9, "harness determinism", 600, [&] { return criterion_determinism(work_dir); }},
  };

  int failures = 0;
  for (const auto& criterion : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = criterion.run();
    } catch (const std::exception& e) {
      outcome.pass = false;
      outcome.detail = std::string("exception: ") + e.what();
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (elapsed > criterion.budget_seconds) {
      outcome.pass = false;
      outcome.detail += " [over budget]";
    }
    if (!outcome.pass) ++failures;
    std::printf("[%s] criterion %d: %s (%.1fs) - %s\n", outcome.pass ? "PASS" : "FAIL",
                criterion.id, criterion.name, elapsed, outcome.detail.c_str());
    std::fflush(stdout);
  }
  if (failures) std::printf("%d of 9 criteria failed\n", failures);
  return failures;
}
