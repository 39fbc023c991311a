// Copyright 2026 The AVE Lab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <map>
#include <random>

#include "brute_force.hpp"
#include "doctest.h"
#include "fixtures.hpp"
#include "ave/mdp.hpp"
#include "ave/oracles.hpp"

using namespace ave;
using namespace ave::testing;

TEST_CASE("state space layout") {
  StateSpace sp({1, 3, 2}, 4);
  CHECK(sp.horizon() == 3);
  CHECK(sp.num_states() == 6);
  CHECK(sp.first_state(2) == 1);
  CHECK(sp.first_state(3) == 4);
  CHECK(sp.layer_of(0) == 1);
  CHECK(sp.layer_of(3) == 2);
  CHECK(sp.layer_of(5) == 3);
  CHECK(sp.in_layer(4, 3));
  CHECK_FALSE(sp.in_layer(4, 2));
  CHECK_THROWS_AS(StateSpace({1, 0}, 2), ModelError);
  CHECK_THROWS_AS(StateSpace({1}, 0), ModelError);
  CHECK_THROWS_AS(StateSpace({}, 2), ModelError);
}

TEST_CASE("instance validation") {
  SUBCASE("reward above 1/H is rejected") {
    CHECK_THROWS_AS(LayeredMdp(StateSpace({1, 1}, 1), {0.6, 0.1}, {{1.0}, {}}), ModelError);
  }
  SUBCASE("negative reward is rejected") {
    CHECK_THROWS_AS(single_layer(-0.1, 0.2), ModelError);
  }
  SUBCASE("row far from a distribution is rejected") {
    CHECK_THROWS_AS(LayeredMdp(StateSpace({1, 2}, 1), {0.1, 0.1, 0.1}, {{0.5, 0.4}, {}, {}}),
                    ModelError);
  }
  SUBCASE("negative probability is rejected") {
    CHECK_THROWS_AS(LayeredMdp(StateSpace({1, 2}, 1), {0.1, 0.1, 0.1}, {{1.5, -0.5}, {}, {}}),
                    ModelError);
  }
  SUBCASE("row within tolerance is kept verbatim") {
    LayeredMdp m(StateSpace({1, 2}, 1), {0.1, 0.1, 0.1}, {{0.5, 0.5 + 5e-13}, {}, {}});
    const auto row = m.transition(0, 0);
    CHECK(row[0] == 0.5);
    CHECK(row[1] == 0.5 + 5e-13);
  }
  SUBCASE("terminal layer must not carry transitions") {
    CHECK_THROWS_AS(LayeredMdp(StateSpace({1}, 1), {0.5}, {{1.0}}), ModelError);
  }
}

TEST_CASE("rollout on a single layer is deterministic") {
  const auto m = single_layer(0.3, 0.7);
  const std::vector<Action> act = {1};
  const auto pol = Policy::deterministic(m.shared_space(), act);
  Rng rng(5);
  const auto t = rollout(m, pol, rng);
  REQUIRE(t.steps.size() == 1);
  CHECK(t.at(1).state == 0);
  CHECK(t.at(1).action == 1);
  CHECK(t.at(1).reward == 0.7);
}

TEST_CASE("uniform policy frequencies follow the uniform law") {
  const auto m = single_layer(0.3, 0.7);
  const auto pol = Policy::uniform(m.shared_space());
  Rng rng(17);
  const int n = 10000;
  int ones = 0;
  for (int i = 0; i < n; ++i) ones += rollout(m, pol, rng).at(1).action == 1;
  const double sigma = std::sqrt(0.25 / n);
  CHECK(std::abs(ones / double(n) - 0.5) <= 3 * sigma);
}

TEST_CASE("rollouts are reproducible for a fixed seed") {
  const auto m = three_layer_chain();
  const auto pol = Policy::uniform(m.shared_space());
  Rng a(99), b(99);
  for (int i = 0; i < 200; ++i) {
    const auto ta = rollout(m, pol, a);
    const auto tb = rollout(m, pol, b);
    for (int h = 1; h <= 3; ++h) {
      CHECK(ta.at(h).state == tb.at(h).state);
      CHECK(ta.at(h).action == tb.at(h).action);
      CHECK(ta.at(h).reward == tb.at(h).reward);
    }
  }
}

TEST_CASE("trajectory invariants hold in both noise modes") {
  std::mt19937_64 gen(3);
  for (auto noise : {RewardNoise::kDeterministic, RewardNoise::kBernoulli}) {
    const auto m = random_mdp(gen, 4, 3, 3, noise);
    const auto pol = Policy::uniform(m.shared_space());
    Rng rng(1);
    for (int i = 0; i < 500; ++i) {
      const auto t = rollout(m, pol, rng);
      REQUIRE(t.steps.size() == 4);
      CHECK(t.at(1).state == m.initial_state());
      for (int h = 1; h <= 4; ++h) {
        CHECK(m.space().in_layer(t.at(h).state, h));
        CHECK(t.at(h).reward >= 0.0);
        CHECK(t.at(h).reward <= 0.25);
        if (noise == RewardNoise::kBernoulli) {
          CHECK((t.at(h).reward == 0.0 || t.at(h).reward == 0.25));
        }
      }
    }
  }
}

TEST_CASE("bernoulli rewards keep the mean") {
  const auto m = single_layer(0.3, 0.7, RewardNoise::kBernoulli);
  const std::vector<Action> act = {0};
  const auto pol = Policy::deterministic(m.shared_space(), act);
  Rng rng(8);
  const int n = 100000;
  double total = 0.0;
  for (int i = 0; i < n; ++i) total += rollout(m, pol, rng).at(1).reward;
  const double sigma = std::sqrt(0.3 * 0.7 / n);
  CHECK(std::abs(total / n - 0.3) <= 3 * sigma);
}

TEST_CASE("rolling into an undefined state is a hard fault") {
  const auto m = deterministic_two_layer();
  Policy pol(m.shared_space());
  pol.set_action(0, 1);
  Rng rng(1);
  CHECK_THROWS_AS(rollout(m, pol, rng), std::logic_error);
  pol.set_action(2, 0);
  CHECK_NOTHROW(rollout(m, pol, rng));
}

TEST_CASE("policy splicing and uniform layers") {
  const auto m = three_layer_chain();
  const auto sp = m.shared_space();
  const std::vector<Action> zeros(sp->num_states(), 0), ones(sp->num_states(), 1);
  const auto lo = Policy::deterministic(sp, zeros);
  const auto hi = Policy::deterministic(sp, ones);
  const auto s = Policy::splice(lo, 2, hi);
  CHECK(s.action(0) == 0u);
  CHECK(s.action(1) == 1u);
  CHECK(s.action(4) == 1u);
  auto u = s;
  u.set_uniform_layer(2);
  CHECK_FALSE(u.action(1).has_value());
  CHECK(u.prob(1, 0) == doctest::Approx(0.5));
  CHECK(u.action(3) == 1u);
}

TEST_CASE("empirical visit frequencies match the exact distribution") {
  const auto m = three_layer_chain();
  const auto pol = Policy::uniform(m.shared_space());
  const auto d = exact_state_distribution(m, pol, 3);
  Rng rng(2024);
  const int n = 100000;
  std::vector<int> counts(2, 0);
  double ret = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto t = rollout(m, pol, rng);
    ++counts[t.at(3).state - m.space().first_state(3)];
    for (const auto& s : t.steps) ret += s.reward;
  }
  for (int i = 0; i < 2; ++i) {
    const double p = d.probs[i];
    CHECK(std::abs(counts[i] / double(n) - p) <= 3 * std::sqrt(p * (1 - p) / n));
  }
  // Returns lie in [0,1], so the standard deviation is at most 1/2.
  CHECK(std::abs(ret / n - exact_value(m, pol)) <= 3 * 0.5 / std::sqrt(double(n)));
}
