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

#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "ave/hypothesis.hpp"
#include "ave/mdp.hpp"

namespace ave {

enum class RewardShape {
  kUniform,  // r ~ U[0, 1/H]
  kSparse,   // r = 0 with probability 0.7, else U[0, 1/H]
};

struct LowRankConfig {
  std::vector<std::size_t> layer_sizes;
  std::size_t num_actions = 2;
  std::size_t rank = 1;
  RewardShape reward_shape = RewardShape::kUniform;
  /// Dirichlet concentration of the basis next-state distributions; small
  /// values give peaked rows.
  double basis_concentration = 1.0;
  RewardNoise noise = RewardNoise::kDeterministic;
};

/// Layered MDP whose transitions factor through `rank` basis distributions
/// per layer, so every Bellman-error matrix at h >= 2 has rank <= rank.
/// Deterministic given the seed. Throws ModelError on empty layers, zero
/// actions or zero rank.
LayeredMdp gen_low_rank_mdp(const LowRankConfig& config, std::uint64_t seed);

struct ClassConfig {
  std::size_t distractors_per_layer = 2;
  /// Distractor values are drawn from {0, 1/res, ..., 1}; 0 means continuous.
  std::size_t value_grid_resolution = 0;
  std::size_t enumeration_guard = HypothesisClass::kDefaultEnumerationGuard;
};

struct GeneratedClass {
  HypothesisClass cls;
  std::size_t optimal_index;  // class index of f*
};

/// Product class with F_h = {f*_h} plus random distractor tables. f*_h sits
/// at a seeded position within each layer. Throws ModelError (with the size)
/// when the product exceeds the enumeration guard.
GeneratedClass gen_hypothesis_class(const LayeredMdp& mdp, const ClassConfig& config,
                                    std::uint64_t seed);

}  // namespace ave
