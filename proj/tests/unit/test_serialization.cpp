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

#include <sstream>

#include "doctest.h"
#include "fixtures.hpp"
#include "ave/generators.hpp"
#include "ave/serialization.hpp"

using namespace ave;

TEST_CASE("instance round trip is exact") {
  LowRankConfig c;
  c.layer_sizes = {1, 3, 4};
  c.num_actions = 3;
  c.rank = 2;
  const auto m = gen_low_rank_mdp(c, 12);
  std::ostringstream out;
  write_instance(out, m, 12);
  std::istringstream in(out.str());
  const auto back = read_instance(in);
  CHECK(back.seed == 12);
  REQUIRE(back.mdp.num_states() == m.num_states());
  for (StateId x = 0; x < m.num_states(); ++x) {
    for (Action a = 0; a < 3; ++a) {
      CHECK(back.mdp.reward(x, a) == m.reward(x, a));
      const auto r1 = m.transition(x, a), r2 = back.mdp.transition(x, a);
      REQUIRE(r1.size() == r2.size());
      for (std::size_t s = 0; s < r1.size(); ++s) CHECK(r1[s] == r2[s]);
    }
  }
  REQUIRE(back.mdp.low_rank().has_value());
  CHECK(back.mdp.low_rank()->weights == m.low_rank()->weights);
  CHECK(back.mdp.low_rank()->basis == m.low_rank()->basis);
  std::ostringstream again;
  write_instance(again, back.mdp, back.seed);
  CHECK(again.str() == out.str());

  std::istringstream noisy(out.str());
  CHECK(read_instance(noisy, RewardNoise::kBernoulli).mdp.noise() == RewardNoise::kBernoulli);
}

TEST_CASE("instances without a factorization round trip") {
  const auto m = ave::testing::three_layer_chain();
  std::ostringstream out;
  write_instance(out, m, 0);
  std::istringstream in(out.str());
  const auto back = read_instance(in);
  CHECK_FALSE(back.mdp.low_rank().has_value());
  CHECK(back.mdp.reward(4, 1) == m.reward(4, 1));
}

TEST_CASE("class round trip is exact") {
  LowRankConfig c;
  c.layer_sizes = {1, 2, 2};
  c.num_actions = 2;
  const auto m = gen_low_rank_mdp(c, 3);
  ClassConfig cc;
  cc.distractors_per_layer = 1;
  const auto gc = gen_hypothesis_class(m, cc, 4);
  std::ostringstream out;
  write_class(out, gc.cls);
  std::istringstream in(out.str());
  const auto back = read_class(in, m.shared_space());
  REQUIRE(back.size() == gc.cls.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    const auto a = back.member(i), b = gc.cls.member(i);
    for (StateId x = 0; x < m.num_states(); ++x) {
      CHECK(a.value(x, 0) == b.value(x, 0));
      CHECK(a.value(x, 1) == b.value(x, 1));
    }
  }
}

TEST_CASE("malformed input is rejected") {
  const char* bad[] = {
      "",
      "1 2",
      "1 2 0\n1\n0.5 x\n0.1\n",
      "1 2 0\n1\n0.5\n",
      "2 1 0\n1 1\n0.1 0.5\n0.1\n",  // row sums to 0.5
      "1 1 0\n1\n0.2\n1\nextra\n",    // trailing junk
  };
  for (const char* text : bad) {
    std::istringstream in(text);
    CHECK_THROWS_AS(read_instance(in), ModelError);
  }
  const auto m = ave::testing::single_layer(0.1, 0.2);
  std::istringstream wrong("1 3\n1\n0.1 0.2 0.3\n");
  CHECK_THROWS_AS(read_class(wrong, m.shared_space()), ModelError);
}

TEST_CASE("reals print with 17 significant digits") {
  CHECK(format_real(0.1) == "0.10000000000000001");
  CHECK(format_real(0.5) == "0.5");
}
