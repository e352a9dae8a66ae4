#pragma once

#include <functional>
#include <memory>
#include <span>

#include "banditms/types.hpp"

namespace banditms {

/// Reference regret bound U(t) used by the balancing baseline.
double reference_U(double t, double d, double L, double R, double M, double delta, double max_bc);

/// A base bandit algorithm driven by the balancer: propose an action for the
/// current round, then receive the observed reward for the feature it
/// proposed. A proposal must precede each update.
class BaseAlgorithm {
 public:
  virtual ~BaseAlgorithm() = default;
  virtual int propose(std::span<const Vec> actions) = 0;
  virtual void update(double reward) = 0;
};

/// Regret balancing over B base algorithms: each base is pulled once (warm
/// start), after which the base maximizing average reward plus the
/// reference-bound bonus U(N_i)/N_i is selected; only the selected base is
/// updated with the observed reward.
class RegretBalancer {
 public:
  RegretBalancer(std::vector<std::unique_ptr<BaseAlgorithm>> bases,
                 std::function<double(double)> reference_bound);

  int n_bases() const { return static_cast<int>(bases_.size()); }
  const std::vector<long long>& n_pulls() const { return n_pulls_; }
  const std::vector<double>& cum_reward() const { return cum_reward_; }

  /// Warm-start rule first (lowest-index unpulled base), then the optimistic
  /// selection rule; ties to lowest index.
  int select_base() const;

  void update_base(int base, double reward);

  struct Step {
    int base = 0;
    int action = 0;
    double reward = 0.0;
  };

  Step step(std::span<const Vec> actions, const std::function<double(int, const Vec&)>& observe);

 private:
  std::vector<std::unique_ptr<BaseAlgorithm>> bases_;
  std::function<double(double)> reference_bound_;
  std::vector<long long> n_pulls_;
  std::vector<double> cum_reward_;
};

}  // namespace banditms
