#include <doctest.h>

#include <cmath>
#include <numbers>

#include "checks.hpp"
#include "trirl/error.hpp"
#include "trirl/rl.hpp"

using namespace trirl;
using namespace trirl::testing;
using std::numbers::pi;

TEST_CASE("grid and table construction") {
  const AlphaGrid g = AlphaGrid::make(0.1, 0.5, 0.1);
  CHECK(g.num_states == 4);
  CHECK(g.alpha_of(3) == doctest::Approx(0.4));
  const QTable t = build_qtable(g, 2);
  CHECK(t.num_states() == 4);
  CHECK(t.num_actions() == 2);
  CHECK(*std::max_element(t.values().begin(), t.values().end()) == 0.0);
  CHECK(*std::min_element(t.values().begin(), t.values().end()) == 0.0);
  CHECK_THROWS_AS(AlphaGrid::make(0.3, 0.3, 0.1), ConfigError);
  CHECK_THROWS_AS(AlphaGrid::make(0.1, 0.5, 0.0), ConfigError);
  CHECK_THROWS(build_qtable(g, 1));

  const AlphaGrid def = AlphaGrid::make(pi / 16, pi / 2, pi / 64);
  CHECK(def.num_states == simulate_grid_loop(pi / 16, pi / 2, pi / 64));
  CHECK(def.state_of(pi / 4) == 12);
  CHECK(def.state_of(10.0) == def.num_states - 1);
  CHECK(def.state_of(-1.0) == 0);
}

TEST_CASE("build_qtable agrees with the literal loop") {
  const Verdict v = qtable_shapes(1000, 1);
  CHECK_MESSAGE(v.pass, v.detail);
}

TEST_CASE("greedy selection") {
  const AlphaGrid g = AlphaGrid::make(0.1, 0.5, 0.1);
  QTable t = build_qtable(g, 2);
  t.at(1, 0) = 1.0;
  t.at(1, 1) = 2.0;
  Rng rng(1);
  const RlHyperparams greedy{0.1, 0.9, 0.0};
  const ActionChoice c = select_action(1, t, g, greedy, rng, ExplorationMode::Uniform);
  CHECK(c.action == kDecreaseAlpha);
  CHECK(c.next_state == 0);
  CHECK(c.next_alpha == doctest::Approx(0.1));
  // ties go to the lowest index
  CHECK(greedy_action(t, 2) == 0);
  // top of the grid, increase: clipped in place
  const ActionChoice top = select_action(3, t, g, greedy, rng, ExplorationMode::Uniform);
  CHECK(top.action == kIncreaseAlpha);
  CHECK(top.next_state == 3);
  t.at(0, 1) = 5.0;
  const ActionChoice bottom = select_action(0, t, g, greedy, rng, ExplorationMode::Uniform);
  CHECK(bottom.action == kDecreaseAlpha);
  CHECK(bottom.next_state == 0);
}

TEST_CASE("greedy selection equals brute-force argmax") {
  Rng rng(5);
  const AlphaGrid g = AlphaGrid::make(pi / 16, pi / 2, pi / 64);
  for (int trial = 0; trial < 50; ++trial) {
    QTable t = build_qtable(g, 2);
    for (std::size_t s = 0; s < t.num_states(); ++s)
      for (std::size_t a = 0; a < 2; ++a)
        t.at(s, a) = std::round(4 * rng.normal()) / 4; // include ties
    for (std::size_t s = 0; s < t.num_states(); ++s) {
      const std::size_t expect = t.at(s, 1) > t.at(s, 0) ? 1 : 0;
      CHECK(choose_action(t, s, {0.1, 0.9, 0.0}, rng, ExplorationMode::Uniform) == expect);
    }
  }
}

TEST_CASE("exploration modes") {
  const AlphaGrid g = AlphaGrid::make(0.1, 0.5, 0.1);
  QTable t = build_qtable(g, 2);
  for (std::size_t s = 0; s < 4; ++s)
    t.at(s, 1) = 1.0;
  Rng rng(3);
  const RlHyperparams always{0.1, 0.9, 1.0};
  int zeros = 0;
  for (int i = 0; i < 1000; ++i) {
    CHECK(choose_action(t, 2, always, rng, ExplorationMode::AlwaysIncrease) == 0);
    zeros += choose_action(t, 2, always, rng, ExplorationMode::Uniform) == 0;
  }
  CHECK(zeros > 400);
  CHECK(zeros < 600);
}

TEST_CASE("rewards") {
  CHECK(reward(2.5, true) == -2.5);
  CHECK(reward(2.5, false) == 0.0);
  CHECK(reward(0.7, false, RewardMode::InverseL2) == 0.0);
  CHECK(reward(2.5, true, RewardMode::InverseL2) == doctest::Approx(0.4));
  CHECK(reward(0.0, true, RewardMode::InverseL2) == kDefaultMaxReward);
  CHECK(reward(1e-9, true, RewardMode::InverseL2, 100.0) == 100.0);
}

TEST_CASE("single update by hand") {
  QTable t(4, 2);
  update(t, 1, 0, -0.5, 2, {0.1, 0.9, 0.1});
  CHECK(t.at(1, 0) == doctest::Approx(-0.05));
  const QTable before = t;
  update(t, 2, 1, 3.0, 1, {0.0, 0.9, 0.1});
  CHECK(t == before);
  t.at(3, 1) = 2.0;
  update(t, 3, 1, 0.0, 0, {0.25, 0.9, 0.1});
  CHECK(t.at(3, 1) == doctest::Approx(1.5));
}

TEST_CASE("hyperparameter ranges") {
  CHECK_NOTHROW(RlHyperparams{}.validate());
  CHECK_THROWS_AS((RlHyperparams{-0.1, 0.9, 0.1}.validate()), ConfigError);
  CHECK_THROWS_AS((RlHyperparams{0.1, 1.0, 0.1}.validate()), ConfigError);
  CHECK_THROWS_AS((RlHyperparams{0.1, 0.9, 1.5}.validate()), ConfigError);
}

TEST_CASE("update agrees with a scalar Bellman step") {
  const Verdict v = bellman_updates(10000, 2);
  CHECK_MESSAGE(v.pass, v.detail);
}

TEST_CASE("Q-values stay bounded under bounded rewards") {
  Rng rng(8);
  const RlHyperparams hp{0.3, 0.9, 0.1};
  const double bound = 2.0 / (1 - hp.discount);
  QTable t(10, 2);
  double worst = 0;
  for (int i = 0; i < 200000; ++i) {
    update(t, rng.below(10), rng.below(2), 4 * rng.uniform() - 2, rng.below(10), hp);
    for (double q : t.values())
      worst = std::max(worst, std::abs(q));
  }
  CHECK(std::isfinite(worst));
  CHECK(worst <= 1.1 * bound);
}

TEST_CASE("chain MDP converges to the value-iteration policy") {
  const auto policy = value_iteration_policy(0.9);
  for (std::size_t s = 1; s < ChainMdp::kStates; ++s)
    CHECK(policy[s] == kDecreaseAlpha);
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    const Verdict v = chain_mdp(seed);
    CHECK_MESSAGE(v.pass, v.detail);
  }
}

TEST_CASE("q-table dump") {
  const AlphaGrid g = AlphaGrid::make(0.1, 0.5, 0.1);
  QTable t = build_qtable(g, 2);
  t.at(2, 1) = -0.25;
  const auto j = qtable_to_json(t, g);
  CHECK(j["alpha_min"] == 0.1);
  CHECK(j["alpha_max"] == 0.5);
  CHECK(j["step"] == 0.1);
  CHECK(j["values"].size() == 8);
  CHECK(j["values"][5] == -0.25);
}
