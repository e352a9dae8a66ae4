#pragma once

#include "banditms/types.hpp"

namespace banditms {

/// Incremental biased regularized least squares:
///
///   theta_hat = argmin_theta ||Phi^T theta - Y||^2 + lambda ||theta - bias||^2
///             = (lambda I + sum phi phi^T)^{-1} sum phi (y - <phi, bias>) + bias.
///
/// The Gram inverse is maintained with rank-one Sherman-Morrison updates,
/// symmetrized after each step, with a periodic full re-inversion guard
/// against drift over long horizons. Ridge regression is the bias = 0 case.
class Regressor {
 public:
  Regressor(Vec bias, double lambda);

  int dim() const { return static_cast<int>(bias_.size()); }
  int n_obs() const { return n_obs_; }
  double lambda() const { return lambda_; }
  const Vec& bias() const { return bias_; }
  const Vec& coeffs() const { return coeffs_; }
  const Mat& gram() const { return gram_; }
  const Mat& inv_gram() const { return inv_gram_; }

  void update(const Vec& phi, double y);
  double predict(const Vec& phi) const;
  /// sqrt(phi^T V^{-1} phi), the ellipsoid width along phi.
  double weighted_norm(const Vec& phi) const;

 private:
  void check_feature(const Vec& phi) const;
  void recompute_coeffs();

  Vec bias_;
  double lambda_;
  Mat gram_;      // V = lambda I + sum phi phi^T
  Mat inv_gram_;  // V^{-1}
  Vec moment_;    // sum phi (y - <phi, bias>)
  Vec coeffs_;    // V^{-1} moment + bias
  int n_obs_ = 0;

  static constexpr int kReinversionPeriod = 1000;
  static constexpr double kDriftTolerance = 1e-6;
};

}  // namespace banditms
