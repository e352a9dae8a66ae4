#include "banditms/ps_oful.hpp"

#include <cmath>
#include <limits>

namespace banditms {

double lambda_for_model(int T, double b, double c, bool* below_one) {
  if (T < 1) throw std::invalid_argument("lambda_for_model: T must be >= 1");
  if (b < 0 || c < 0) throw std::invalid_argument("lambda_for_model: radii must be nonnegative");
  const double bc = b + c;
  if (bc == 0.0) throw std::invalid_argument("lambda_for_model: b + c must be positive");
  const double lambda = 1.0 / (T * bc * bc);
  if (below_one) *below_one = lambda < 1.0;
  return lambda;
}

namespace {

void check_delta(double delta) {
  if (!(delta > 0.0 && delta <= 0.25))
    throw std::invalid_argument("delta must lie in (0, 1/4]");
}

}  // namespace

double compute_Ut(double t, double T, double d, double L, double R, double delta, double max_bc) {
  check_delta(delta);
  if (t < 0 || T < 1 || d < 1 || L < 0 || R < 0 || max_bc < 0)
    throw std::invalid_argument("compute_Ut: invalid argument");
  const double log_term = std::log(1.0 + t * T * L * L * max_bc * max_bc / d);
  return 1.0 + 2.0 / T + 8.0 * d * log_term +
         32.0 * R * R *
             std::log((2.0 * std::sqrt(2.0) * R +
                       std::sqrt(1.0 + 1.0 / T + 4.0 * d * log_term)) /
                      delta);
}

double compute_RSq_ps(double t, double T, double d, double L, double R, double G, double M,
                      double delta, double max_bc) {
  if (!(delta > 0.0 && delta <= 1.0))
    throw std::invalid_argument("compute_RSq_ps: delta must lie in (0, 1]");
  if (M < 1) throw std::invalid_argument("compute_RSq_ps: M must be >= 1");
  if (t < 0 || T < 1 || d < 1 || L < 0 || R < 0 || G < 0 || max_bc < 0)
    throw std::invalid_argument("compute_RSq_ps: invalid argument");
  const double log_term = std::log((1.0 + t * T * L * L * max_bc * max_bc / d) / delta);
  return 8.0 * std::log(M) *
         (G * G + L * L / T + 2.0 * G * L / std::sqrt(T) + R * R * L * L * d * log_term);
}

double confidence_radius(double delta, double U, double RSq, double R) {
  check_delta(delta);
  if (U < 0 || RSq < 0) throw std::invalid_argument("confidence_radius: U and RSq must be >= 0");
  if (R < 0) throw std::invalid_argument("confidence_radius: R must be >= 0");
  const double s = std::sqrt(2.0 * (1.0 + U) * std::log(std::sqrt(1.0 + U) / delta));
  return 1.0 + 2.0 * RSq + 2.0 * U + 4.0 * R * s +
         32.0 * R * R *
             std::log((std::sqrt(8.0) * R + std::sqrt(1.0 + RSq + U + 2.0 * R * s)) / delta);
}

double expert_validity_bound(const Regressor& expert, double G, double R, double L, double t,
                             double delta, double b, double c) {
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("expert_validity_bound: delta must lie in (0, 1)");
  if (G < 0 || R < 0 || L < 0 || t < 0 || b < 0 || c < 0)
    throw std::invalid_argument("expert_validity_bound: invalid argument");
  const double lambda = expert.lambda();
  const double d = expert.dim();
  const double log_term = std::log((1.0 + t * L * L / (lambda * d)) / delta);
  return G + R * L * std::sqrt(d * std::max(log_term, 0.0)) + L * std::sqrt(lambda) * (b + c);
}

double ps_range_halfwidth(const AssumptionConstants& c, double max_bc) {
  const double t = c.T;
  const double log_term =
      std::log((1.0 + t * c.T * c.L * c.L * max_bc * max_bc / c.d) / c.delta);
  return c.G + c.L / std::sqrt(c.T) + c.R * c.L * std::sqrt(c.d * std::max(log_term, 0.0));
}

PsOful::PsOful(AssumptionConstants constants, std::vector<BallModel> models, PsOfulOptions opts)
    : constants_(constants),
      models_(std::move(models)),
      opts_(opts),
      aggregator_(1, 0.0, 1.0, opts.eta) {
  constants_.validate();
  if (models_.empty()) throw std::invalid_argument("PsOful: need at least one model");
  if (static_cast<int>(models_.size()) != constants_.M)
    throw std::invalid_argument("PsOful: constants.M does not match the model count");

  max_bc_ = 0.0;
  lambdas_.reserve(models_.size());
  experts_.reserve(models_.size());
  for (const auto& m : models_) {
    if (m.center_estimate.size() != constants_.d)
      throw std::invalid_argument("PsOful: model center dimension mismatch");
    max_bc_ = std::max(max_bc_, m.effective_radius());
    lambdas_.push_back(lambda_for_model(constants_.T, m.radius, m.center_error));
    experts_.emplace_back(m.center_estimate, lambdas_.back());
  }

  const double half = ps_range_halfwidth(constants_, max_bc_);
  aggregator_ = SqAggregator(constants_.M, -half, 2.0 * half, opts_.eta);

  const int d = constants_.d;
  conf_gram_ = constants_.L * constants_.L * Mat::Identity(d, d);
  conf_inv_gram_ = Mat::Identity(d, d) / (constants_.L * constants_.L);
  conf_moment_ = Vec::Zero(d);
  conf_theta_ = Vec::Zero(d);
  validity_flags_.assign(models_.size(), 0);
}

double PsOful::gamma_prev() const {
  const double t = round_;  // history size when selecting at round t+1
  const double U = compute_Ut(t, constants_.T, constants_.d, constants_.L, constants_.R,
                              constants_.delta, max_bc_);
  const double RSq = compute_RSq_ps(t, constants_.T, constants_.d, constants_.L, constants_.R,
                                    constants_.G, constants_.M, constants_.delta, max_bc_);
  return confidence_radius(constants_.delta, U, RSq, constants_.R);
}

int optimistic_argmax(const Vec& theta, const Mat& inv_gram, double bonus,
                      std::span<const Vec> actions) {
  if (actions.empty()) throw std::invalid_argument("optimistic_argmax: empty action set");
  int best = 0;
  double best_score = -std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < actions.size(); ++a) {
    const Vec& phi = actions[a];
    const double q = phi.dot(inv_gram * phi);
    const double score = phi.dot(theta) + bonus * std::sqrt(std::max(q, 0.0));
    if (score > best_score) {
      best_score = score;
      best = static_cast<int>(a);
    }
  }
  return best;
}

Vec optimistic_ball_direction(const Vec& theta, const Mat& inv_gram, double bonus,
                              double radius) {
  const int d = static_cast<int>(theta.size());
  Vec phi = theta;
  if (phi.norm() < 1e-12) phi = Vec::Unit(d, 0);
  phi *= radius / phi.norm();
  double value = -std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < 100; ++iter) {
    // best parameter in the ellipsoid for this direction, then best direction
    const Vec v = inv_gram * phi;
    const double w = std::sqrt(std::max(phi.dot(v), 0.0));
    Vec opt = theta;
    if (w > 1e-15) opt += (bonus / w) * v;
    if (opt.norm() < 1e-15) break;
    phi = (radius / opt.norm()) * opt;
    const double next = phi.dot(opt);
    if (next - value < 1e-12 * std::max(1.0, std::abs(next))) break;
    value = next;
  }
  return phi;
}

int PsOful::select_action(std::span<const Vec> actions, double gamma) const {
  if (gamma < 0) throw std::invalid_argument("PsOful: gamma must be nonnegative");
  return optimistic_argmax(conf_theta_, conf_inv_gram_, std::sqrt(gamma), actions);
}

Vec PsOful::select_action_unit_ball(double gamma) const {
  if (gamma < 0) throw std::invalid_argument("PsOful: gamma must be nonnegative");
  return optimistic_ball_direction(conf_theta_, conf_inv_gram_, std::sqrt(gamma), constants_.L);
}

double PsOful::finish_round(const Vec& phi, const std::function<double()>& observe_reward) {
  std::vector<double> preds(experts_.size());
  for (std::size_t i = 0; i < experts_.size(); ++i) preds[i] = experts_[i].predict(phi);
  const double yhat = aggregator_.predict(preds);

  if (opts_.track_validity) {
    for (std::size_t i = 0; i < experts_.size(); ++i) {
      const double bound =
          expert_validity_bound(experts_[i], constants_.G, constants_.R, constants_.L, round_,
                                constants_.delta, models_[i].radius, models_[i].center_error);
      if (std::abs(preds[i]) > bound) ++validity_flags_[i];
    }
  }

  // least squares of oracle predictions on features, before observing y
  conf_gram_.noalias() += phi * phi.transpose();
  const Vec u = conf_inv_gram_ * phi;
  conf_inv_gram_.noalias() -= u * u.transpose() / (1.0 + phi.dot(u));
  conf_inv_gram_ = ((conf_inv_gram_ + conf_inv_gram_.transpose()) * 0.5).eval();
  conf_moment_ += phi * yhat;
  conf_theta_ = conf_inv_gram_ * conf_moment_;

  const double y = observe_reward();
  for (auto& expert : experts_) expert.update(phi, y);
  aggregator_.update(preds, y);

  observed_.append(phi, y);
  oracle_preds_.push_back(yhat);
  ++round_;
  return yhat;
}

PsOful::Step PsOful::step(std::span<const Vec> actions,
                          const std::function<double(int, const Vec&)>& observe) {
  Step out;
  out.action = select_action(actions, gamma_prev());
  out.feature = actions[out.action];
  out.oracle_prediction = finish_round(out.feature, [&] {
    out.reward = observe(out.action, out.feature);
    return out.reward;
  });
  return out;
}

PsOful::Step PsOful::step_unit_ball(const std::function<double(const Vec&)>& observe) {
  Step out;
  out.feature = select_action_unit_ball(gamma_prev());
  out.oracle_prediction = finish_round(out.feature, [&] {
    out.reward = observe(out.feature);
    return out.reward;
  });
  return out;
}

void PsOful::ingest(const Vec& phi, double reward) {
  if (phi.size() != constants_.d) throw std::invalid_argument("PsOful: feature dimension mismatch");
  finish_round(phi, [&] { return reward; });
}

}  // namespace banditms
