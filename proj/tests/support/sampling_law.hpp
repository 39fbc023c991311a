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

// The exploration sampling law of the learner, written out atom by atom:
// roll in pi_g to layer h, act by W'_P there, observe the reward and the
// next state.

#pragma once

#include <cstddef>
#include <vector>

#include "ave/estimators.hpp"
#include "ave/hypothesis.hpp"
#include "ave/mdp.hpp"
#include "ave/oracles.hpp"

namespace ave::testing {

struct SampleAtom {
  double prob;
  TransitionSample sample;
};

inline std::vector<SampleAtom> exploration_atoms(const LayeredMdp& mdp, const Hypothesis& g, int h,
                                                 const Mixture& p, double mu) {
  const auto& sp = mdp.space();
  const int H = sp.horizon();
  const std::size_t A = mdp.num_actions();
  const auto d = exact_state_distribution(mdp, g.greedy_policy(), h);
  std::vector<SampleAtom> atoms;
  for (std::size_t s = 0; s < d.probs.size(); ++s) {
    if (d.probs[s] == 0.0) continue;
    const StateId x = sp.first_state(h) + static_cast<StateId>(s);
    for (Action a = 0; a < A; ++a) {
      // Marginal action law: uniform with probability A mu, else a draw from P.
      double pa = mu;
      for (const auto& e : p.entries()) {
        if (e.hypothesis.greedy_action(x) == a) pa += (1.0 - A * mu) * e.weight;
      }
      const double r = mdp.reward(x, a);
      std::vector<std::pair<double, double>> rewards;
      if (mdp.noise() == RewardNoise::kBernoulli) {
        rewards = {{1.0 - H * r, 0.0}, {H * r, 1.0 / H}};
      } else {
        rewards = {{1.0, r}};
      }
      for (const auto& [pr, rv] : rewards) {
        if (pr == 0.0) continue;
        if (h == H) {
          atoms.push_back({d.probs[s] * pa * pr, {x, a, rv, x, true}});
          continue;
        }
        const auto row = mdp.transition(x, a);
        for (std::size_t n = 0; n < row.size(); ++n) {
          if (row[n] == 0.0) continue;
          const StateId y = sp.first_state(h + 1) + static_cast<StateId>(n);
          atoms.push_back({d.probs[s] * pa * pr * row[n], {x, a, rv, y, false}});
        }
      }
    }
  }
  return atoms;
}

/// Behaviour policy with the same layer-h marginal, for Monte Carlo.
inline Policy exploration_behaviour(const LayeredMdp& mdp, const Hypothesis& g, int h,
                                    const Mixture& p, double mu) {
  const auto& sp = mdp.space();
  const std::size_t A = mdp.num_actions();
  Policy pol = g.greedy_policy();
  for (StateId x = sp.first_state(h); x < sp.first_state(h) + sp.layer_size(h); ++x) {
    std::vector<double> probs(A);
    for (Action a = 0; a < A; ++a) probs[a] = w_prime(p, mu, x, a);
    pol.set_distribution(x, probs);
  }
  return pol;
}

}  // namespace ave::testing
