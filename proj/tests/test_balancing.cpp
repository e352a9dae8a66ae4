#include <doctest.h>

#include <cmath>

#include "banditms/balancing.hpp"
#include "banditms/env.hpp"
#include "banditms/harness.hpp"
#include "banditms/rng.hpp"

using namespace banditms;

namespace {

// Minimal base that always proposes a fixed action.
class StubBase final : public BaseAlgorithm {
 public:
  explicit StubBase(int action) : action_(action) {}
  int propose(std::span<const Vec>) override { return action_; }
  void update(double reward) override { last_reward = reward; }
  double last_reward = 0.0;

 private:
  int action_;
};

RegretBalancer make_balancer(int n_bases, std::function<double(double)> ref) {
  std::vector<std::unique_ptr<BaseAlgorithm>> bases;
  for (int i = 0; i < n_bases; ++i) bases.push_back(std::make_unique<StubBase>(i % 2));
  return RegretBalancer(std::move(bases), std::move(ref));
}

}  // namespace

TEST_SUITE_BEGIN("balancing");

TEST_CASE("a single base is always selected") {
  auto balancer = make_balancer(1, [](double n) { return std::sqrt(n); });
  CHECK(balancer.select_base() == 0);
  balancer.update_base(0, 1.0);
  CHECK(balancer.select_base() == 0);
}

TEST_CASE("warm start visits every base once in index order") {
  auto balancer = make_balancer(3, [](double n) { return std::sqrt(n); });
  for (int expected = 0; expected < 3; ++expected) {
    CHECK(balancer.select_base() == expected);
    balancer.update_base(expected, 0.0);
  }
}

TEST_CASE("optimistic selection follows average reward plus bonus") {
  auto balancer = make_balancer(2, [](double n) { return std::sqrt(n); });
  // base 0: R = 10 over N = 10; base 1: R = 0 over N = 5
  for (int i = 0; i < 10; ++i) balancer.update_base(0, 1.0);
  for (int i = 0; i < 5; ++i) balancer.update_base(1, 0.0);
  // scores: 1 + sqrt(10)/10 = 1.316... vs sqrt(5)/5 = 0.447...
  CHECK(balancer.select_base() == 0);
}

TEST_CASE("selection is invariant to a constant shift of every score") {
  auto ref = [](double n) { return std::sqrt(n); };
  const double shift = 7.5;
  auto shifted = [&](double n) { return std::sqrt(n) + shift * n; };
  auto a = make_balancer(3, ref);
  auto b = make_balancer(3, shifted);
  Rng rng(41);
  for (int i = 0; i < 3; ++i) {
    const double r = rng.uniform01();
    a.update_base(i, r);
    b.update_base(i, r);
  }
  for (int round = 0; round < 50; ++round) {
    const int pick_a = a.select_base();
    const int pick_b = b.select_base();
    CHECK(pick_a == pick_b);
    const double r = rng.uniform01();
    a.update_base(pick_a, r);
    b.update_base(pick_b, r);
  }
}

TEST_CASE("update_base touches only the selected base") {
  auto balancer = make_balancer(3, [](double n) { return std::sqrt(n); });
  balancer.update_base(1, 0.7);
  CHECK(balancer.n_pulls()[0] == 0);
  CHECK(balancer.n_pulls()[1] == 1);
  CHECK(balancer.n_pulls()[2] == 0);
  CHECK(balancer.cum_reward()[1] == doctest::Approx(0.7));
  CHECK(balancer.cum_reward()[0] == 0.0);
}

TEST_CASE("pull counts sum to the number of rounds") {
  auto balancer = make_balancer(4, [](double n) { return std::sqrt(n); });
  Rng rng(42);
  std::vector<Vec> actions(3, Vec::Ones(2));
  for (int t = 1; t <= 60; ++t) {
    balancer.step(actions, [&](int, const Vec&) { return rng.uniform01(); });
    long long total = 0;
    for (long long n : balancer.n_pulls()) total += n;
    CHECK(total == t);
  }
}

TEST_CASE("invalid base index is rejected") {
  auto balancer = make_balancer(2, [](double n) { return std::sqrt(n); });
  CHECK_THROWS_AS(balancer.update_base(5, 0.0), std::out_of_range);
  CHECK_THROWS_AS(balancer.update_base(-1, 0.0), std::out_of_range);
}

TEST_CASE("empty base set is rejected") {
  std::vector<std::unique_ptr<BaseAlgorithm>> none;
  CHECK_THROWS_AS(RegretBalancer(std::move(none), [](double) { return 0.0; }),
                  std::invalid_argument);
}

TEST_CASE("balancing over single-model bases runs on the balancing20 environment") {
  const EnvInstance env = gen_ball_env(BallVariant::Balancing20, 5, {100, 30, false});
  const auto regrets = run_policy_on_instance("regret-balancing", env, 0.01);
  CHECK(regrets.size() == 100);
  double total = 0;
  for (double r : regrets) {
    CHECK(r >= 0.0);
    total += r;
  }
  CHECK(std::isfinite(total));
}

TEST_SUITE_END();
