#include "banditms/env.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace banditms {

namespace {

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_vec(const Vec& v) {
  std::string out;
  for (int i = 0; i < v.size(); ++i) {
    if (i) out += ' ';
    out += fmt17(v[i]);
  }
  return out;
}

}  // namespace

BallVariant parse_ball_variant(const std::string& name) {
  if (name == "overlapping") return BallVariant::Overlapping;
  if (name == "disjoint") return BallVariant::Disjoint;
  if (name == "balancing20") return BallVariant::Balancing20;
  throw std::invalid_argument("unknown ball-environment variant: " + name);
}

std::string to_string(BallVariant v) {
  switch (v) {
    case BallVariant::Overlapping: return "overlapping";
    case BallVariant::Disjoint: return "disjoint";
    case BallVariant::Balancing20: return "balancing20";
  }
  return "?";
}

Vec sample_uniform_ball(const Vec& center, double radius, Rng& rng) {
  if (radius < 0) throw std::invalid_argument("sample_uniform_ball: negative radius");
  if (radius == 0) return center;
  const int d = static_cast<int>(center.size());
  const Vec direction = rng.unit_sphere(d);
  const double r = radius * std::pow(rng.uniform01(), 1.0 / d);
  return center + r * direction;
}

Vec EnvInstance::action_feature(int round, int action) const {
  if (kind == EnvKind::FeatureSelection)
    return feature_maps.at(true_model_index).feature(0, action);
  return round_actions.at(round - 1).col(action);
}

double EnvInstance::true_mean(int round, int action) const {
  if (action < 0 || action >= constants.K)
    throw std::out_of_range("EnvInstance: unknown action id");
  return action_feature(round, action).dot(theta_star);
}

double EnvInstance::optimal_value(int round) const {
  if (unit_ball_actions) return constants.L * theta_star.norm();
  double best = true_mean(round, 0);
  for (int a = 1; a < constants.K; ++a) best = std::max(best, true_mean(round, a));
  return best;
}

double EnvInstance::instantaneous_regret(int round, int action) const {
  return optimal_value(round) - true_mean(round, action);
}

double EnvInstance::instantaneous_regret_feature(int round, const Vec& phi) const {
  return optimal_value(round) - phi.dot(theta_star);
}

double EnvInstance::draw_reward(int round, int action, Rng& rng) const {
  return true_mean(round, action) + noise_sigma * rng.normal();
}

double EnvInstance::draw_reward_feature(const Vec& phi, Rng& rng) const {
  return phi.dot(theta_star) + noise_sigma * rng.normal();
}

void EnvInstance::check_assumptions() const {
  constexpr double tol = 1e-9;
  if (theta_star.norm() > constants.S + tol)
    throw std::logic_error("env: ||theta*|| exceeds the declared S");
  if (kind == EnvKind::ParamSelection) {
    const auto& m = ball_models.at(true_model_index);
    if ((theta_star - m.center_estimate).norm() > m.effective_radius() + tol)
      throw std::logic_error("env: theta* outside the declared agent ball B(mu_hat, b + c)");
    if (!unit_ball_actions)
      for (const auto& table : round_actions)
        if (table.colwise().norm().maxCoeff() > constants.L + tol)
          throw std::logic_error("env: action feature norm exceeds L");
  } else {
    for (const auto& map : feature_maps)
      for (const auto& ctx : map.contexts)
        if (ctx.colwise().norm().maxCoeff() > constants.L + tol)
          throw std::logic_error("env: feature-map norm exceeds L");
  }
  // mean rewards within G over the instance's own action sets
  const double mean_bound = constants.L * theta_star.norm();
  if (mean_bound > constants.G + tol)
    throw std::logic_error("env: mean rewards can exceed the declared G");
}

std::string EnvInstance::manifest() const {
  std::ostringstream out;
  out << "kind = "
      << (kind == EnvKind::ParamSelection ? "param-selection" : "feature-selection") << '\n';
  out << "variant = " << variant_name << '\n';
  out << "seed = " << seed << '\n';
  out << "d = " << constants.d << '\n';
  out << "T = " << constants.T << '\n';
  out << "K = " << constants.K << '\n';
  out << "M = " << constants.M << '\n';
  out << "L = " << fmt17(constants.L) << '\n';
  out << "S = " << fmt17(constants.S) << '\n';
  out << "G = " << fmt17(constants.G) << '\n';
  out << "R = " << fmt17(constants.R) << '\n';
  out << "noise_sigma = " << fmt17(noise_sigma) << '\n';
  out << "noise_interp = "
      << (noise_interp == NoiseInterpretation::Stddev ? "stddev" : "variance") << '\n';
  out << "unit_ball_actions = " << (unit_ball_actions ? 1 : 0) << '\n';
  out << "true_model_index = " << true_model_index << '\n';
  out << "theta_star = " << fmt_vec(theta_star) << '\n';
  for (std::size_t i = 0; i < ball_models.size(); ++i) {
    out << "model." << i << ".center_estimate = " << fmt_vec(ball_models[i].center_estimate)
        << '\n';
    out << "model." << i << ".radius = " << fmt17(ball_models[i].radius) << '\n';
    out << "model." << i << ".center_error = " << fmt17(ball_models[i].center_error) << '\n';
  }
  return out.str();
}

EnvInstance gen_ball_env(BallVariant variant, std::uint64_t seed, BallEnvOptions opts) {
  if (opts.T < 1) throw std::invalid_argument("gen_ball_env: T must be >= 1");
  if (!opts.unit_ball && opts.K < 1)
    throw std::invalid_argument("gen_ball_env: K must be >= 1 in finite mode");

  const int d = 2;
  std::vector<std::pair<double, double>> center_ranges;
  std::vector<double> radii;
  double declared_S = 0.0;  // 0 -> derive from the generated models
  switch (variant) {
    case BallVariant::Overlapping:
      center_ranges.assign(5, {1.0, 2.0});
      radii = {0.1, 0.2, 0.3, 0.4, 0.5};
      break;
    case BallVariant::Disjoint:
      center_ranges = {{1.0, 2.0}, {3.0, 4.0}, {-2.0, -1.0}, {-4.0, -3.0}, {4.0, 5.0}};
      radii = {0.1, 0.2, 0.3, 0.4, 0.5};
      declared_S = 7.0;
      break;
    case BallVariant::Balancing20: {
      const std::pair<double, double> group_ranges[4] = {{1, 2}, {2, 3}, {3, 4}, {4, 5}};
      const double group_radii[4] = {0.3, 0.5, 0.3, 0.2};
      for (int g = 0; g < 4; ++g)
        for (int j = 0; j < 5; ++j) {
          center_ranges.push_back(group_ranges[g]);
          radii.push_back(group_radii[g]);
        }
      declared_S = 7.0;
      break;
    }
  }
  const int M = static_cast<int>(radii.size());
  const double center_error = 0.1;

  Rng rng(mix_seed(seed, 0x62616c6cULL));  // instance generation stream

  std::vector<Vec> centers(M);
  for (int i = 0; i < M; ++i) {
    centers[i] = Vec(d);
    for (int j = 0; j < d; ++j)
      centers[i][j] = rng.uniform(center_ranges[i].first, center_ranges[i].second);
  }

  const int true_index = static_cast<int>(rng.uniform_int(M));
  const Vec theta = sample_uniform_ball(centers[true_index], radii[true_index], rng);

  EnvInstance env;
  env.kind = EnvKind::ParamSelection;
  env.variant_name = to_string(variant);
  env.seed = seed;
  env.theta_star = theta;
  env.true_model_index = true_index;
  env.noise_sigma = 0.1;
  env.noise_interp = NoiseInterpretation::Stddev;
  env.unit_ball_actions = opts.unit_ball;

  env.ball_models.reserve(M);
  for (int i = 0; i < M; ++i) {
    const Vec direction = rng.unit_sphere(d);
    const double magnitude = rng.uniform(0.0, center_error);
    env.ball_models.push_back({centers[i] + magnitude * direction, radii[i], center_error});
  }

  if (!opts.unit_ball) {
    env.round_actions.reserve(opts.T);
    for (int t = 0; t < opts.T; ++t) {
      Mat A(d, opts.K);
      for (int a = 0; a < opts.K; ++a) A.col(a) = rng.unit_sphere(d);
      env.round_actions.push_back(std::move(A));
    }
  }

  double max_reach = 0.0;
  for (const auto& m : env.ball_models)
    max_reach = std::max(max_reach, m.center_estimate.norm() + m.effective_radius());

  auto& c = env.constants;
  c.d = d;
  c.L = 1.0;
  c.S = declared_S > 0.0 ? declared_S : max_reach;
  c.G = c.L * max_reach;
  c.R = 0.1;
  c.T = opts.T;
  c.M = M;
  c.K = opts.unit_ball ? 0 : opts.K;

  env.check_assumptions();
  return env;
}

EnvInstance gen_feature_env(std::uint64_t seed, FeatureEnvOptions opts) {
  if (opts.T < 1) throw std::invalid_argument("gen_feature_env: T must be >= 1");
  const int d = 10, K = 50, M = 10;

  Rng rng(mix_seed(seed, 0x66656174ULL));

  Vec theta(d);
  for (int j = 0; j < d; ++j) theta[j] = rng.uniform(-1.0, 1.0);
  theta /= theta.norm();  // ||theta*|| = S = 1

  EnvInstance env;
  env.kind = EnvKind::FeatureSelection;
  env.variant_name = "feature-selection";
  env.seed = seed;
  env.theta_star = theta;
  env.true_model_index = 0;
  env.noise_interp = opts.noise_interp;
  env.noise_sigma =
      opts.noise_interp == NoiseInterpretation::Variance ? std::sqrt(0.1) : 0.1;

  env.feature_maps.reserve(M);
  for (int i = 0; i < M; ++i) {
    Mat features(d, K);
    for (int a = 0; a < K; ++a)
      for (int j = 0; j < d; ++j) features(j, a) = rng.uniform01();
    env.feature_maps.push_back({i, {std::move(features)}});
  }

  auto& c = env.constants;
  c.d = d;
  c.L = 4.0;
  c.S = 1.0;
  c.G = c.L * c.S;
  c.R = env.noise_sigma;
  c.T = opts.T;
  c.M = M;
  c.K = K;

  env.check_assumptions();
  return env;
}

}  // namespace banditms
