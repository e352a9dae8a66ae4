#include "banditms/sq_aggregator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace banditms {

namespace {

double log_sum_exp(const Vec& v) {
  const double m = v.maxCoeff();
  double s = 0.0;
  for (int i = 0; i < v.size(); ++i) s += std::exp(v[i] - m);
  return m + std::log(s);
}

}  // namespace

SqAggregator::SqAggregator(int n_experts, double beta, double ell, double eta)
    : beta_(beta), ell_(ell), eta_(eta) {
  if (n_experts < 1) throw std::invalid_argument("SqAggregator: need at least one expert");
  if (!(ell_ > 0.0)) throw std::invalid_argument("SqAggregator: range width ell must be positive");
  if (!(eta_ > 0.0)) throw std::invalid_argument("SqAggregator: eta must be positive");
  log_weights_ = Vec::Zero(n_experts);
}

Vec SqAggregator::normalized_weights() const {
  const double lse = log_sum_exp(log_weights_);
  Vec v(log_weights_.size());
  for (int i = 0; i < v.size(); ++i) v[i] = std::exp(log_weights_[i] - lse);
  return v;
}

double SqAggregator::scale(double raw) const {
  return (std::clamp(raw, beta_, beta_ + ell_) - beta_) / ell_;
}

Vec SqAggregator::scaled(std::span<const double> expert_preds) const {
  if (static_cast<int>(expert_preds.size()) != n_experts())
    throw std::invalid_argument("SqAggregator: wrong number of expert predictions");
  Vec h(n_experts());
  for (int i = 0; i < h.size(); ++i) {
    if (!std::isfinite(expert_preds[i]))
      throw std::invalid_argument("SqAggregator: non-finite expert prediction");
    h[i] = scale(expert_preds[i]);
  }
  return h;
}

double SqAggregator::predict(std::span<const double> expert_preds) const {
  const Vec h = scaled(expert_preds);
  const double lse = log_sum_exp(log_weights_);

  // Delta(b) = -(1/eta) log sum_i v_i exp(-eta (b - h_i)^2), b in {0, 1}.
  Vec a0(h.size()), a1(h.size());
  for (int i = 0; i < h.size(); ++i) {
    const double log_v = log_weights_[i] - lse;
    a0[i] = log_v - eta_ * h[i] * h[i];
    a1[i] = log_v - eta_ * (1.0 - h[i]) * (1.0 - h[i]);
  }
  const double delta0 = -log_sum_exp(a0) / eta_;
  const double delta1 = -log_sum_exp(a1) / eta_;

  const double y_prime = std::clamp(0.5 * (1.0 + delta0 - delta1), 0.0, 1.0);
  if (y_prime * y_prime > delta0 + 1e-9 || (1.0 - y_prime) * (1.0 - y_prime) > delta1 + 1e-9)
    throw std::logic_error("SqAggregator: substitution prediction violates feasibility");
  return beta_ + ell_ * y_prime;
}

void SqAggregator::update(std::span<const double> expert_preds, double y) {
  if (!std::isfinite(y)) throw std::invalid_argument("SqAggregator: non-finite observation");
  const Vec h = scaled(expert_preds);
  const double y_scaled = scale(y);
  for (int i = 0; i < h.size(); ++i) {
    const double err = y_scaled - h[i];
    log_weights_[i] -= eta_ * err * err;
  }
}

double empirical_sq_regret(std::span<const AggregatorRound> trace) {
  if (trace.empty()) throw std::invalid_argument("empirical_sq_regret: empty trace");
  const std::size_t m = trace.front().expert_preds.size();
  double agg_loss = 0.0;
  std::vector<double> expert_loss(m, 0.0);
  for (const auto& round : trace) {
    if (round.expert_preds.size() != m)
      throw std::invalid_argument("empirical_sq_regret: inconsistent expert count");
    agg_loss += (round.agg_pred - round.y) * (round.agg_pred - round.y);
    for (std::size_t i = 0; i < m; ++i) {
      const double e = round.expert_preds[i] - round.y;
      expert_loss[i] += e * e;
    }
  }
  return agg_loss - *std::min_element(expert_loss.begin(), expert_loss.end());
}

}  // namespace banditms
