#include "banditms/balancing.hpp"

#include <cmath>
#include <limits>

namespace banditms {

double reference_U(double t, double d, double L, double R, double M, double delta, double max_bc) {
  if (M < 2)
    throw std::invalid_argument("reference_U: need M >= 2 (log M degenerate otherwise)");
  if (t < 1 || d < 1 || L < 0 || R < 0 || max_bc < 0 || !(delta > 0 && delta < 1))
    throw std::invalid_argument("reference_U: invalid argument");
  const double q = 1.0 + t * t * L * L * max_bc * max_bc / d;
  return std::sqrt(d * std::log(q)) +
         2.0 * d * R * L *
             std::sqrt(t * std::log(M) * std::log(1.0 + t / d) * std::log(q / delta));
}

RegretBalancer::RegretBalancer(std::vector<std::unique_ptr<BaseAlgorithm>> bases,
                               std::function<double(double)> reference_bound)
    : bases_(std::move(bases)), reference_bound_(std::move(reference_bound)) {
  if (bases_.empty()) throw std::invalid_argument("RegretBalancer: need at least one base");
  n_pulls_.assign(bases_.size(), 0);
  cum_reward_.assign(bases_.size(), 0.0);
}

int RegretBalancer::select_base() const {
  for (std::size_t i = 0; i < bases_.size(); ++i)
    if (n_pulls_[i] == 0) return static_cast<int>(i);
  int best = 0;
  double best_score = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < bases_.size(); ++i) {
    const double n = static_cast<double>(n_pulls_[i]);
    const double score = cum_reward_[i] / n + reference_bound_(n) / n;
    if (score > best_score) {
      best_score = score;
      best = static_cast<int>(i);
    }
  }
  return best;
}

void RegretBalancer::update_base(int base, double reward) {
  if (base < 0 || base >= n_bases()) throw std::out_of_range("RegretBalancer: invalid base index");
  ++n_pulls_[base];
  cum_reward_[base] += reward;
  bases_[base]->update(reward);
}

RegretBalancer::Step RegretBalancer::step(
    std::span<const Vec> actions, const std::function<double(int, const Vec&)>& observe) {
  Step out;
  out.base = select_base();
  out.action = bases_[out.base]->propose(actions);
  out.reward = observe(out.action, actions[out.action]);
  update_base(out.base, out.reward);
  return out;
}

}  // namespace banditms
