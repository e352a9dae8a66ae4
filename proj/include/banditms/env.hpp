#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "banditms/fs_scb.hpp"
#include "banditms/ps_oful.hpp"
#include "banditms/rng.hpp"
#include "banditms/types.hpp"

namespace banditms {

enum class EnvKind { ParamSelection, FeatureSelection };
enum class BallVariant { Overlapping, Disjoint, Balancing20 };
enum class NoiseInterpretation { Stddev, Variance };

BallVariant parse_ball_variant(const std::string& name);
std::string to_string(BallVariant v);

/// Uniform draw from the closed ball B(center, radius): a uniform direction
/// scaled by radius * U^{1/d}.
Vec sample_uniform_ball(const Vec& center, double radius, Rng& rng);

/// A fully generated synthetic bandit instance. Immutable after construction;
/// all randomness is a pure function of (variant, seed).
class EnvInstance {
 public:
  EnvKind kind = EnvKind::ParamSelection;
  std::string variant_name;
  std::uint64_t seed = 0;
  AssumptionConstants constants;  // delta left at its default; the harness resolves it
  Vec theta_star;
  int true_model_index = 0;  // hidden from policies; oracle baseline only
  double noise_sigma = 0.0;
  NoiseInterpretation noise_interp = NoiseInterpretation::Stddev;

  std::vector<BallModel> ball_models;         // parameter selection
  std::vector<FeatureMapModel> feature_maps;  // feature selection
  bool unit_ball_actions = false;
  std::vector<Mat> round_actions;  // per-round d x K feature tables (finite mode)

  int horizon() const { return constants.T; }
  int n_actions() const { return constants.K; }

  Vec action_feature(int round, int action) const;
  /// True mean reward of an action (feature selection uses the true map).
  double true_mean(int round, int action) const;
  double true_mean_feature(const Vec& phi) const { return phi.dot(theta_star); }
  /// Best achievable mean reward this round (over the ball when continuous).
  double optimal_value(int round) const;

  double instantaneous_regret(int round, int action) const;
  double instantaneous_regret_feature(int round, const Vec& phi) const;

  double draw_reward(int round, int action, Rng& rng) const;
  double draw_reward_feature(const Vec& phi, Rng& rng) const;

  /// Structured key=value audit manifest (seed, variant, derived constants).
  std::string manifest() const;

  void check_assumptions() const;  // throws std::logic_error on violation
};

struct BallEnvOptions {
  int T = 1000;
  int K = 50;               // finite discretization of the unit ball
  bool unit_ball = false;   // continuous action set instead of the K-table
};

struct FeatureEnvOptions {
  int T = 1000;
  NoiseInterpretation noise_interp = NoiseInterpretation::Variance;  // N(0, 0.1) as variance
};

EnvInstance gen_ball_env(BallVariant variant, std::uint64_t seed, BallEnvOptions opts = {});
EnvInstance gen_feature_env(std::uint64_t seed, FeatureEnvOptions opts = {});

}  // namespace banditms
