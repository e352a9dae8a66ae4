#pragma once

#include <functional>
#include <span>

#include "banditms/regressor.hpp"
#include "banditms/sq_aggregator.hpp"
#include "banditms/types.hpp"

namespace banditms {

/// One candidate parameter model: estimated center mu_hat, exact radius b and
/// center-estimation error bound c. The agent's effective ball is
/// B(mu_hat, b + c).
struct BallModel {
  Vec center_estimate;
  double radius = 0.0;
  double center_error = 0.0;

  double effective_radius() const { return radius + center_error; }
};

/// Per-model regularization weight lambda_i = 1 / (T (b + c)^2). Values below
/// one fall outside the regime the regret analysis needs; they are allowed
/// but reported through `below_one` when given.
double lambda_for_model(int T, double b, double c, bool* below_one = nullptr);

/// High-probability bound U_t on the cumulative squared prediction error of a
/// true model's biased least-squares expert.
double compute_Ut(double t, double T, double d, double L, double R, double delta, double max_bc);

/// High-probability bound on the square-loss aggregator regret R_Sq(t) for
/// the biased least-squares experts.
double compute_RSq_ps(double t, double T, double d, double L, double R, double G, double M,
                      double delta, double max_bc);

/// Confidence-set radius gamma_t(delta) built from U_t and R_Sq(t).
double confidence_radius(double delta, double U, double RSq, double R);

/// High-probability bound on |<phi, theta_hat_i>| for a model still
/// consistent with containing the true parameter; predictions beyond it mark
/// the model as a diagnostic outlier (never removed).
double expert_validity_bound(const Regressor& expert, double G, double R, double L, double t,
                             double delta, double b, double c);

/// Width of the aggregator range [beta, beta + ell] for the biased experts,
/// evaluated at horizon T (the range bound's most conservative round).
double ps_range_halfwidth(const AssumptionConstants& c, double max_bc);

/// argmax_a <phi(a), theta> + bonus ||phi(a)||_{V^{-1}}, ties to lowest index.
int optimistic_argmax(const Vec& theta, const Mat& inv_gram, double bonus,
                      std::span<const Vec> actions);

/// Optimistic feature over the ball {||phi|| <= radius}: alternating
/// maximization between the best in-ellipsoid parameter for a direction and
/// the best direction for a parameter.
Vec optimistic_ball_direction(const Vec& theta, const Mat& inv_gram, double bonus, double radius);

struct PsOfulOptions {
  double eta = 2.0;              // aggregator loss-scaling exponent
  bool track_validity = false;   // log expert-validity flags each round
};

/// Parameter-selection OFUL: M biased least-squares experts aggregated by a
/// square-loss expert-advice oracle; actions chosen optimistically over the
/// containing ellipsoid of the oracle-prediction confidence set.
class PsOful {
 public:
  PsOful(AssumptionConstants constants, std::vector<BallModel> models, PsOfulOptions opts = {});

  const AssumptionConstants& constants() const { return constants_; }
  double max_bc() const { return max_bc_; }
  int rounds() const { return round_; }
  const std::vector<Regressor>& experts() const { return experts_; }
  const SqAggregator& aggregator() const { return aggregator_; }
  const Vec& conf_theta() const { return conf_theta_; }
  const Mat& conf_gram() const { return conf_gram_; }
  const Mat& conf_inv_gram() const { return conf_inv_gram_; }
  const History& observed() const { return observed_; }
  const std::vector<double>& oracle_predictions() const { return oracle_preds_; }
  const std::vector<long long>& validity_flags() const { return validity_flags_; }

  /// gamma_{t-1}(delta) for the upcoming round, with t-1 = rounds played.
  double gamma_prev() const;

  /// Optimistic action over a finite set: argmax of
  /// <phi, conf_theta> + sqrt(gamma) ||phi||_{V^{-1}}, ties to lowest index.
  int select_action(std::span<const Vec> actions, double gamma) const;

  /// Optimistic feature over the ball {||phi|| <= L} via alternating
  /// maximization between the action direction and the confidence ellipsoid.
  Vec select_action_unit_ball(double gamma) const;

  struct Step {
    int action = -1;  // -1 for the continuous action set
    Vec feature;
    double oracle_prediction = 0.0;
    double reward = 0.0;
  };

  /// One full round on a finite action set. The callback observes the reward
  /// of the chosen action.
  Step step(std::span<const Vec> actions, const std::function<double(int, const Vec&)>& observe);

  /// One full round on the ball action set {||phi|| <= L}.
  Step step_unit_ball(const std::function<double(const Vec&)>& observe);

  /// Propose without playing (for meta-algorithms that own the play/update
  /// cycle); `ingest` completes the round for the feature actually played.
  int propose(std::span<const Vec> actions) const { return select_action(actions, gamma_prev()); }
  void ingest(const Vec& phi, double reward);

 private:
  double finish_round(const Vec& phi, const std::function<double()>& observe_reward);

  AssumptionConstants constants_;
  std::vector<BallModel> models_;
  std::vector<double> lambdas_;
  double max_bc_;
  PsOfulOptions opts_;

  std::vector<Regressor> experts_;
  SqAggregator aggregator_;

  Mat conf_gram_;      // V_t = L^2 I + sum phi phi^T
  Mat conf_inv_gram_;  // V_t^{-1}
  Vec conf_moment_;    // sum phi * yhat
  Vec conf_theta_;     // V_t^{-1} conf_moment

  History observed_;                 // (phi_s, y_s)
  std::vector<double> oracle_preds_;  // yhat_s
  std::vector<long long> validity_flags_;
  int round_ = 0;
};

}  // namespace banditms
