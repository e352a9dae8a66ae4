#pragma once

#include <span>

#include "banditms/types.hpp"

namespace banditms {

/// Independent task learning: standard OFUL with a single ridge regressor
/// (bias 0, lambda = 1) and the self-normalized confidence width
/// sqrt(lambda) S + R sqrt(2 log(det(V_t)^{1/2} / (delta det(lambda I)^{1/2}))).
class OfulItl {
 public:
  OfulItl(AssumptionConstants constants, double lambda = 1.0);

  double width() const;
  const Vec& theta() const { return theta_; }
  const Mat& inv_gram() const { return inv_gram_; }
  int rounds() const { return round_; }

  int propose(std::span<const Vec> actions) const;
  Vec propose_unit_ball() const;
  void update(const Vec& phi, double y);

 private:
  AssumptionConstants constants_;
  double lambda_;
  Mat gram_;
  Mat inv_gram_;
  Vec moment_;
  Vec theta_;
  double logdet_ratio_ = 0.0;  // log(det V_t / det(lambda I))
  int round_ = 0;
};

}  // namespace banditms
