#pragma once

#include <functional>
#include <span>

#include "banditms/regressor.hpp"
#include "banditms/rng.hpp"
#include "banditms/sq_aggregator.hpp"
#include "banditms/types.hpp"

namespace banditms {

/// One candidate feature map: per-context, per-action feature vectors.
/// contexts[x] is a d x K matrix whose column a is phi(x, a).
struct FeatureMapModel {
  int map_id = 0;
  std::vector<Mat> contexts;

  int n_contexts() const { return static_cast<int>(contexts.size()); }
  int n_actions() const { return contexts.empty() ? 0 : static_cast<int>(contexts[0].cols()); }
  Vec feature(int context, int action) const { return contexts.at(context).col(action); }
};

/// High-probability bound Q_t on the cumulative squared prediction error of
/// the true model's ridge expert.
double compute_Qt(double t, double d, double L, double R, double S, double delta,
                  std::span<const double> lambdas);

/// High-probability bound on the square-loss aggregator regret R_Sq(t) for
/// the ridge experts.
double compute_RSq_fs(double t, double d, double L, double R, double S, double G, double M,
                      double delta, std::span<const double> lambdas);

/// Oracle prediction-error bound D_t(delta) built from Q_t and R_Sq(t).
double prediction_error_bound(double delta, double Q, double RSq, double R);

/// Inverse-gap-weighted distribution over actions: with a' the greedy action
/// (lowest index on ties), p(a) = 1 / (kappa + alpha (pred(a') - pred(a)))
/// for a != a' and p(a') takes the remaining mass.
std::vector<double> igw_distribution(std::span<const double> predictions, double alpha,
                                     double kappa);

/// Width of the aggregator range [beta, beta + ell] for the ridge experts at
/// horizon T.
double fs_range_halfwidth(const AssumptionConstants& c, std::span<const double> lambdas);

struct FsScbOptions {
  double eta = 2.0;
};

/// Feature-selection SquareCB: one ridge expert per candidate feature map,
/// aggregated by the square-loss oracle; actions sampled from the
/// inverse-gap-weighted distribution with kappa = K and
/// alpha = sqrt(K T / D_T(delta)) fixed for the run.
class FsScb {
 public:
  FsScb(AssumptionConstants constants, std::vector<FeatureMapModel> maps,
        std::vector<double> lambdas = {}, FsScbOptions opts = {});

  const AssumptionConstants& constants() const { return constants_; }
  double alpha() const { return alpha_; }
  double kappa() const { return kappa_; }
  int rounds() const { return round_; }
  const std::vector<Regressor>& experts() const { return experts_; }
  const SqAggregator& aggregator() const { return aggregator_; }

  /// Oracle predictions yhat(x, a) for every action under the current weights.
  std::vector<double> predict_all(int context) const;

  struct Step {
    int action = 0;
    double oracle_prediction = 0.0;
    double reward = 0.0;
  };

  /// One full round: predict all actions, sample from the inverse-gap
  /// distribution, observe, update experts and aggregator weights with the
  /// played action only.
  Step step(int context, const std::function<double(int)>& observe, Rng& rng);

 private:
  AssumptionConstants constants_;
  std::vector<FeatureMapModel> maps_;
  std::vector<double> lambdas_;
  FsScbOptions opts_;
  SqAggregator aggregator_;
  std::vector<Regressor> experts_;
  double alpha_ = 0.0;
  double kappa_ = 0.0;
  int round_ = 0;
};

}  // namespace banditms
