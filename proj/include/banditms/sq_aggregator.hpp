#pragma once

#include <span>

#include "banditms/types.hpp"

namespace banditms {

/// One round of an aggregator trace: the experts' raw predictions, the
/// aggregated prediction and the observed value.
struct AggregatorRound {
  std::vector<double> expert_preds;
  double agg_pred = 0.0;
  double y = 0.0;
};

/// Square-loss prediction with expert advice (exponential weights over M
/// experts, predictions and observations scaled into the fixed range
/// [beta, beta + ell]).
///
/// The loss-scaling exponent eta defaults to 2, the mixability constant for
/// square loss on the unit interval; the substitution prediction
/// y' = clamp((1 + Delta(0) - Delta(1)) / 2, 0, 1) then satisfies the two
/// feasibility conditions y'^2 <= Delta(0) and (1 - y')^2 <= Delta(1), which
/// are asserted on every call. Weights live in log domain.
class SqAggregator {
 public:
  SqAggregator(int n_experts, double beta, double ell, double eta = 2.0);

  int n_experts() const { return static_cast<int>(log_weights_.size()); }
  double beta() const { return beta_; }
  double ell() const { return ell_; }
  double eta() const { return eta_; }
  const Vec& log_weights() const { return log_weights_; }
  /// Normalized weight vector v_t (sums to one).
  Vec normalized_weights() const;

  /// Aggregated prediction for the experts' raw predictions; raw values are
  /// clamped into [beta, beta + ell] before scaling.
  double predict(std::span<const double> expert_preds) const;

  /// Exponential-weight update with the observed value y (clamped into range).
  void update(std::span<const double> expert_preds, double y);

 private:
  double scale(double raw) const;
  Vec scaled(std::span<const double> expert_preds) const;

  Vec log_weights_;
  double beta_;
  double ell_;
  double eta_;
};

/// Realized square-loss regret of an aggregated trace: the aggregator's total
/// square loss minus the best single expert's.
double empirical_sq_regret(std::span<const AggregatorRound> trace);

}  // namespace banditms
