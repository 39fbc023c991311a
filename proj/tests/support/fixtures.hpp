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

// Small hand-built instances shared by the unit tests.

#pragma once

#include <memory>
#include <vector>

#include "ave/hypothesis.hpp"
#include "ave/mdp.hpp"

namespace ave::testing {

/// H = 1, A = 2, one state with the given rewards.
inline LayeredMdp single_layer(double r0, double r1,
                               RewardNoise noise = RewardNoise::kDeterministic) {
  return LayeredMdp(StateSpace({1}, 2), {r0, r1}, {{}, {}}, noise);
}

/// H = 3, A = 2, layer sizes {1, 2, 2}; mixed stochastic transitions.
inline LayeredMdp three_layer_chain() {
  StateSpace sp({1, 2, 2}, 2);
  std::vector<double> r = {0.10, 0.20,  // x1
                           0.30, 0.05,  // layer 2
                           0.00, 0.25,
                           0.15, 0.30,  // layer 3
                           0.33, 0.01};
  std::vector<std::vector<double>> p = {
      {0.7, 0.3}, {0.2, 0.8},  // x1
      {1.0, 0.0}, {0.5, 0.5},  // layer 2
      {0.0, 1.0}, {0.9, 0.1},
      {}, {}, {}, {}};
  return LayeredMdp(std::move(sp), std::move(r), std::move(p));
}

/// H = 2, A = 2, deterministic transitions; action 0 goes to state 1 of
/// layer 2, action 1 to state 2.
inline LayeredMdp deterministic_two_layer() {
  StateSpace sp({1, 2}, 2);
  std::vector<double> r = {0.1, 0.4, 0.5, 0.0, 0.05, 0.2};
  std::vector<std::vector<double>> p = {{1.0, 0.0}, {0.0, 1.0}, {}, {}, {}, {}};
  return LayeredMdp(std::move(sp), std::move(r), std::move(p));
}

inline Hypothesis constant_hypothesis(const std::shared_ptr<const StateSpace>& sp, double c) {
  std::vector<double> v(sp->num_states() * sp->num_actions(), c);
  return Hypothesis::from_dense(sp, v);
}

/// Class holding exactly the given dense hypotheses in layer-aligned form:
/// every layer offers the tables of all inputs, so the product contains
/// each input at index sum_h i * n^(H-h).
inline HypothesisClass class_from_dense(const std::shared_ptr<const StateSpace>& sp,
                                        const std::vector<std::vector<double>>& dense) {
  const std::size_t A = sp->num_actions();
  std::vector<std::vector<LayerTablePtr>> layers(sp->horizon());
  for (const auto& d : dense) {
    for (int h = 1; h <= sp->horizon(); ++h) {
      auto t = std::make_shared<LayerTable>();
      const auto first = sp->first_state(h) * A;
      t->values.assign(d.begin() + first, d.begin() + first + sp->layer_size(h) * A);
      layers[h - 1].push_back(std::move(t));
    }
  }
  return HypothesisClass(sp, std::move(layers));
}

/// Class index of the member that picks table i on every layer.
inline std::size_t diagonal_index(const HypothesisClass& cls, std::size_t i) {
  std::vector<std::size_t> c(cls.horizon(), i);
  return cls.index_of(c);
}

}  // namespace ave::testing
