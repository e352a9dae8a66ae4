#include "banditms/fs_scb.hpp"

#include <cmath>
#include <limits>

namespace banditms {

namespace {

double max_ridge_complexity(double t, double d, double L, double S, double log_scale,
                            std::span<const double> lambdas) {
  // max_i { lambda_i S^2 + log_scale * d * log(1 + t L^2 / (lambda_i d)) }
  double best = -std::numeric_limits<double>::infinity();
  for (double lam : lambdas) {
    if (!(lam > 0)) throw std::invalid_argument("lambda values must be positive");
    const double v = lam * S * S + log_scale * d * std::log(1.0 + t * L * L / (lam * d));
    best = std::max(best, v);
  }
  return best;
}

}  // namespace

double compute_Qt(double t, double d, double L, double R, double S, double delta,
                  std::span<const double> lambdas) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("compute_Qt: delta must lie in (0, 1)");
  if (t < 0 || d < 1 || L < 0 || R < 0 || S < 0 || lambdas.empty())
    throw std::invalid_argument("compute_Qt: invalid argument");
  const double a = max_ridge_complexity(t, d, L, S, 4.0, lambdas);
  return 1.0 + 2.0 * a +
         32.0 * R * R * std::log((std::sqrt(8.0) * R + std::sqrt(1.0 + a)) / delta);
}

double compute_RSq_fs(double t, double d, double L, double R, double S, double G, double M,
                      double delta, std::span<const double> lambdas) {
  if (M < 1) throw std::invalid_argument("compute_RSq_fs: M must be >= 1");
  if (!(delta > 0.0 && delta <= 1.0))
    throw std::invalid_argument("compute_RSq_fs: delta must lie in (0, 1]");
  if (t < 0 || d < 1 || L < 0 || R < 0 || S < 0 || G < 0 || lambdas.empty())
    throw std::invalid_argument("compute_RSq_fs: invalid argument");
  const double a = max_ridge_complexity(t, d, L, S, 1.0, lambdas);
  return 8.0 * std::log(M) * R * R * L * L * (G * G + a + std::log(1.0 / delta));
}

double prediction_error_bound(double delta, double Q, double RSq, double R) {
  if (!(delta > 0.0 && delta <= 0.25))
    throw std::invalid_argument("prediction_error_bound: delta must lie in (0, 1/4]");
  if (Q < 0 || RSq < 0)
    throw std::invalid_argument("prediction_error_bound: Q and RSq must be >= 0");
  if (R < 0) throw std::invalid_argument("prediction_error_bound: R must be >= 0");
  const double s = std::sqrt(2.0 * (1.0 + Q) * std::log(std::sqrt(1.0 + Q) / delta));
  return 1.0 + 2.0 * RSq + 2.0 * Q + 4.0 * R * s +
         32.0 * R * R *
             std::log((std::sqrt(8.0) * R + std::sqrt(1.0 + RSq + Q + 2.0 * R * s)) / delta);
}

std::vector<double> igw_distribution(std::span<const double> predictions, double alpha,
                                     double kappa) {
  if (predictions.empty()) throw std::invalid_argument("igw_distribution: empty predictions");
  if (!(alpha > 0)) throw std::invalid_argument("igw_distribution: alpha must be positive");
  if (!(kappa >= 1)) throw std::invalid_argument("igw_distribution: kappa must be >= 1");
  const std::size_t k = predictions.size();
  std::size_t greedy = 0;
  for (std::size_t a = 1; a < k; ++a)
    if (predictions[a] > predictions[greedy]) greedy = a;

  std::vector<double> p(k, 0.0);
  double mass = 0.0;
  for (std::size_t a = 0; a < k; ++a) {
    if (a == greedy) continue;
    const double gap = predictions[greedy] - predictions[a];  // >= 0
    p[a] = 1.0 / (kappa + alpha * gap);
    mass += p[a];
  }
  p[greedy] = 1.0 - mass;
  if (p[greedy] < 0.0)
    throw std::runtime_error("igw_distribution: infeasible distribution (kappa too small)");
  return p;
}

double fs_range_halfwidth(const AssumptionConstants& c, std::span<const double> lambdas) {
  double half = 0.0;
  for (double lam : lambdas) {
    const double log_term = std::log((1.0 + c.T * c.L * c.L / (lam * c.d)) / c.delta);
    half = std::max(half, c.G + c.R * c.L * std::sqrt(c.d * std::max(log_term, 0.0)) +
                              c.L * std::sqrt(lam) * c.S);
  }
  return half;
}

FsScb::FsScb(AssumptionConstants constants, std::vector<FeatureMapModel> maps,
             std::vector<double> lambdas, FsScbOptions opts)
    : constants_(constants), maps_(std::move(maps)), lambdas_(std::move(lambdas)), opts_(opts),
      aggregator_(1, 0.0, 1.0, opts.eta) {
  constants_.validate();
  if (maps_.empty()) throw std::invalid_argument("FsScb: need at least one feature map");
  if (static_cast<int>(maps_.size()) != constants_.M)
    throw std::invalid_argument("FsScb: constants.M does not match the map count");
  if (constants_.K < 1) throw std::invalid_argument("FsScb: finite action set required (K >= 1)");
  if (lambdas_.empty()) lambdas_.assign(maps_.size(), 1.0);
  if (lambdas_.size() != maps_.size())
    throw std::invalid_argument("FsScb: lambda count does not match the map count");
  for (double lam : lambdas_)
    if (!(lam >= 1.0)) throw std::invalid_argument("FsScb: every lambda must be >= 1");
  for (const auto& m : maps_) {
    if (m.n_actions() != constants_.K)
      throw std::invalid_argument("FsScb: map action count mismatch");
    for (const auto& mat : m.contexts)
      if (mat.rows() != constants_.d) throw std::invalid_argument("FsScb: map dimension mismatch");
  }

  const double half = fs_range_halfwidth(constants_, lambdas_);
  aggregator_ = SqAggregator(constants_.M, -half, 2.0 * half, opts_.eta);
  experts_.reserve(maps_.size());
  for (std::size_t i = 0; i < maps_.size(); ++i)
    experts_.emplace_back(Vec::Zero(constants_.d), lambdas_[i]);

  const double Q = compute_Qt(constants_.T, constants_.d, constants_.L, constants_.R,
                              constants_.S, constants_.delta, lambdas_);
  const double RSq = compute_RSq_fs(constants_.T, constants_.d, constants_.L, constants_.R,
                                    constants_.S, constants_.G, constants_.M, constants_.delta,
                                    lambdas_);
  const double D_T = prediction_error_bound(constants_.delta, Q, RSq, constants_.R);
  kappa_ = constants_.K;
  alpha_ = std::sqrt(constants_.K * static_cast<double>(constants_.T) / D_T);
}

std::vector<double> FsScb::predict_all(int context) const {
  std::vector<double> yhat(constants_.K);
  std::vector<double> preds(maps_.size());
  for (int a = 0; a < constants_.K; ++a) {
    for (std::size_t i = 0; i < maps_.size(); ++i)
      preds[i] = experts_[i].predict(maps_[i].feature(context, a));
    yhat[a] = aggregator_.predict(preds);
  }
  return yhat;
}

FsScb::Step FsScb::step(int context, const std::function<double(int)>& observe, Rng& rng) {
  const std::vector<double> yhat = predict_all(context);
  const std::vector<double> p = igw_distribution(yhat, alpha_, kappa_);
  Step out;
  out.action = rng.sample(p);
  out.oracle_prediction = yhat[out.action];
  out.reward = observe(out.action);

  std::vector<double> preds(maps_.size());
  for (std::size_t i = 0; i < maps_.size(); ++i) {
    const Vec phi = maps_[i].feature(context, out.action);
    preds[i] = experts_[i].predict(phi);
    experts_[i].update(phi, out.reward);
  }
  aggregator_.update(preds, out.reward);
  ++round_;
  return out;
}

}  // namespace banditms
