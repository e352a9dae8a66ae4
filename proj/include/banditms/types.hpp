#pragma once

#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace banditms {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Problem constants shared by policies, environments and the closed-form
/// confidence radii: feature dimension d, feature-norm bound L, parameter-norm
/// bound S, mean-reward bound G, sub-Gaussian noise scale R, horizon T,
/// number of models M, number of actions K (0 for a continuous action set)
/// and confidence parameter delta.
struct AssumptionConstants {
  int d = 1;
  double L = 1.0;
  double S = 0.0;
  double G = 0.0;
  double R = 0.0;
  int T = 1;
  int M = 1;
  int K = 0;
  double delta = 0.25;

  void validate() const {
    if (d < 1) throw std::invalid_argument("constants: d must be >= 1");
    if (T < 1) throw std::invalid_argument("constants: T must be >= 1");
    if (M < 1) throw std::invalid_argument("constants: M must be >= 1");
    if (K < 0) throw std::invalid_argument("constants: K must be >= 0");
    if (L < 0 || S < 0 || G < 0 || R < 0)
      throw std::invalid_argument("constants: L, S, G, R must be nonnegative");
    if (!(delta > 0.0 && delta <= 0.25))
      throw std::invalid_argument("constants: delta must lie in (0, 1/4]");
  }
};

/// Append-only log of (feature, reward) pairs observed by a policy.
class History {
 public:
  void append(Vec feature, double reward) {
    rounds_.emplace_back(std::move(feature), reward);
  }
  int size() const { return static_cast<int>(rounds_.size()); }
  const std::pair<Vec, double>& operator[](int i) const { return rounds_.at(i); }
  const std::vector<std::pair<Vec, double>>& rounds() const { return rounds_; }

 private:
  std::vector<std::pair<Vec, double>> rounds_;
};

struct RegretRecord {
  int instance_id = 0;
  int round = 0;  // 1-based
  std::string algorithm;
  double instantaneous_regret = 0.0;
  double cumulative_regret = 0.0;
};

/// Pseudo-regret of a chosen action given the round's true mean rewards.
/// Ties in the optimal action go to the lowest index.
inline double instantaneous_regret(std::span<const double> true_means, int chosen) {
  if (true_means.empty()) throw std::invalid_argument("instantaneous_regret: empty action set");
  if (chosen < 0 || chosen >= static_cast<int>(true_means.size()))
    throw std::out_of_range("instantaneous_regret: unknown action id");
  double best = true_means[0];
  for (double m : true_means)
    if (m > best) best = m;
  return best - true_means[chosen];
}

/// Per-round cumulative-regret records grouped by algorithm, queryable for
/// mean and sample standard deviation across instances.
class RegretTable {
 public:
  struct Stat {
    double mean = 0.0;
    double stddev = 0.0;
    int n = 0;
  };

  /// Builds the table from instantaneous-regret records. Records must be
  /// sorted by round within each (instance, algorithm) stream; cumulative
  /// sums are computed here. Duplicate (instance, algorithm, round) keys are
  /// rejected.
  static RegretTable accumulate(const std::vector<RegretRecord>& records);

  bool empty() const { return cells_.empty(); }
  std::vector<std::string> algorithms() const;
  int max_round(const std::string& algorithm) const;

  Stat at(const std::string& algorithm, int round) const;
  /// Cumulative regret at (algorithm, round) for every instance, ordered by
  /// instance id.
  std::vector<double> cumulative_at(const std::string& algorithm, int round) const;

 private:
  // algorithm -> round -> (instance_id -> cumulative regret)
  std::map<std::string, std::map<int, std::map<int, double>>> cells_;
};

}  // namespace banditms
