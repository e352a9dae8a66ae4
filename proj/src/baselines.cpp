#include "banditms/baselines.hpp"

#include <cmath>

#include "banditms/ps_oful.hpp"

namespace banditms {

OfulItl::OfulItl(AssumptionConstants constants, double lambda)
    : constants_(constants), lambda_(lambda) {
  constants_.validate();
  if (!(lambda_ > 0)) throw std::invalid_argument("OfulItl: lambda must be positive");
  const int d = constants_.d;
  gram_ = lambda_ * Mat::Identity(d, d);
  inv_gram_ = Mat::Identity(d, d) / lambda_;
  moment_ = Vec::Zero(d);
  theta_ = Vec::Zero(d);
}

double OfulItl::width() const {
  return std::sqrt(lambda_) * constants_.S +
         constants_.R * std::sqrt(2.0 * (0.5 * logdet_ratio_ + std::log(1.0 / constants_.delta)));
}

int OfulItl::propose(std::span<const Vec> actions) const {
  return optimistic_argmax(theta_, inv_gram_, width(), actions);
}

Vec OfulItl::propose_unit_ball() const {
  return optimistic_ball_direction(theta_, inv_gram_, width(), constants_.L);
}

void OfulItl::update(const Vec& phi, double y) {
  if (phi.size() != constants_.d) throw std::invalid_argument("OfulItl: dimension mismatch");
  if (!phi.allFinite() || !std::isfinite(y))
    throw std::invalid_argument("OfulItl: non-finite observation");
  const Vec u = inv_gram_ * phi;
  const double denom = 1.0 + phi.dot(u);
  logdet_ratio_ += std::log(denom);
  gram_.noalias() += phi * phi.transpose();
  inv_gram_.noalias() -= u * u.transpose() / denom;
  inv_gram_ = ((inv_gram_ + inv_gram_.transpose()) * 0.5).eval();
  moment_ += phi * y;
  theta_ = inv_gram_ * moment_;
  ++round_;
}

}  // namespace banditms
