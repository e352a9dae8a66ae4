#include "banditms/regressor.hpp"

#include <cmath>

namespace banditms {

Regressor::Regressor(Vec bias, double lambda) : bias_(std::move(bias)), lambda_(lambda) {
  if (!(lambda_ > 0.0)) throw std::invalid_argument("Regressor: lambda must be positive");
  if (bias_.size() == 0) throw std::invalid_argument("Regressor: empty bias vector");
  if (!bias_.allFinite()) throw std::invalid_argument("Regressor: non-finite bias");
  const int d = dim();
  gram_ = lambda_ * Mat::Identity(d, d);
  inv_gram_ = Mat::Identity(d, d) / lambda_;
  moment_ = Vec::Zero(d);
  coeffs_ = bias_;
}

void Regressor::check_feature(const Vec& phi) const {
  if (phi.size() != bias_.size())
    throw std::invalid_argument("Regressor: feature dimension mismatch");
}

void Regressor::update(const Vec& phi, double y) {
  check_feature(phi);
  if (!phi.allFinite() || !std::isfinite(y))
    throw std::invalid_argument("Regressor: non-finite observation");

  gram_.noalias() += phi * phi.transpose();
  const Vec u = inv_gram_ * phi;
  inv_gram_.noalias() -= u * u.transpose() / (1.0 + phi.dot(u));
  inv_gram_ = ((inv_gram_ + inv_gram_.transpose()) * 0.5).eval();
  moment_ += phi * (y - phi.dot(bias_));
  ++n_obs_;

  if (n_obs_ % kReinversionPeriod == 0) {
    const Mat direct = gram_.ldlt().solve(Mat::Identity(dim(), dim()));
    if ((inv_gram_ - direct).cwiseAbs().maxCoeff() > kDriftTolerance) inv_gram_ = direct;
  }
  recompute_coeffs();
}

void Regressor::recompute_coeffs() { coeffs_ = inv_gram_ * moment_ + bias_; }

double Regressor::predict(const Vec& phi) const {
  check_feature(phi);
  return phi.dot(coeffs_);
}

double Regressor::weighted_norm(const Vec& phi) const {
  check_feature(phi);
  const double q = phi.dot(inv_gram_ * phi);
  return std::sqrt(std::max(q, 0.0));
}

}  // namespace banditms
