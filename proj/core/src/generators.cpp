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

#include "ave/generators.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "ave/oracles.hpp"

namespace ave {
namespace {

std::vector<double> dirichlet(std::size_t n, double concentration, Rng& rng) {
  std::gamma_distribution<double> gamma(concentration, 1.0);
  std::vector<double> v(n);
  double total = 0.0;
  for (auto& x : v) {
    x = gamma(rng);
    total += x;
  }
  if (!(total > 0.0)) {
    // Tiny concentrations can underflow every draw; fall back to a vertex.
    std::fill(v.begin(), v.end(), 0.0);
    v[std::uniform_int_distribution<std::size_t>(0, n - 1)(rng)] = 1.0;
    return v;
  }
  for (auto& x : v) x /= total;
  return v;
}

}  // namespace

LayeredMdp gen_low_rank_mdp(const LowRankConfig& config, std::uint64_t seed) {
  if (config.layer_sizes.empty()) throw ModelError("generator needs at least one layer");
  for (auto s : config.layer_sizes) {
    if (s == 0) throw ModelError("generator config has an empty layer");
  }
  if (config.num_actions == 0) throw ModelError("generator needs at least one action");
  if (config.rank == 0) throw ModelError("generator needs rank >= 1");
  if (!(config.basis_concentration > 0.0)) throw ModelError("basis concentration must be positive");

  StateSpace space(config.layer_sizes, config.num_actions);
  const int H = space.horizon();
  const std::size_t A = config.num_actions;
  const std::size_t M = config.rank;
  Rng rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double r_max = 1.0 / H;

  std::vector<double> rewards(space.num_states() * A);
  for (auto& r : rewards) {
    if (config.reward_shape == RewardShape::kSparse && unit(rng) < 0.7) {
      r = 0.0;
    } else {
      r = unit(rng) * r_max;
    }
  }

  LowRankSpec spec;
  spec.rank = M;
  for (int h = 2; h <= H; ++h) {
    std::vector<std::vector<double>> layer;
    for (std::size_t m = 0; m < M; ++m) {
      layer.push_back(dirichlet(space.layer_size(h), config.basis_concentration, rng));
    }
    spec.basis.push_back(std::move(layer));
  }
  std::vector<std::vector<double>> transitions(space.num_states() * A);
  const std::size_t interior = H > 1 ? space.first_state(H) * A : 0;
  spec.weights.resize(interior);
  for (std::size_t row = 0; row < interior; ++row) {
    const StateId x = static_cast<StateId>(row / A);
    const int h = space.layer_of(x);
    spec.weights[row] = dirichlet(M, 1.0, rng);
    const auto& basis = spec.basis[h - 1];
    std::vector<double> p(space.layer_size(h + 1), 0.0);
    for (std::size_t m = 0; m < M; ++m) {
      for (std::size_t s = 0; s < p.size(); ++s) p[s] += spec.weights[row][m] * basis[m][s];
    }
    transitions[row] = std::move(p);
  }
  return LayeredMdp(std::move(space), std::move(rewards), std::move(transitions), config.noise,
                    std::move(spec));
}

GeneratedClass gen_hypothesis_class(const LayeredMdp& mdp, const ClassConfig& config,
                                    std::uint64_t seed) {
  const auto& sp = mdp.space();
  const int H = sp.horizon();
  const std::size_t A = sp.num_actions();
  const std::size_t per_layer = config.distractors_per_layer + 1;
  long double product = 1.0L;
  for (int h = 1; h <= H; ++h) product *= static_cast<long double>(per_layer);
  if (product > static_cast<long double>(config.enumeration_guard)) {
    throw ModelError("product class of size " + std::to_string(static_cast<double>(product)) +
                     " exceeds the enumeration guard " + std::to_string(config.enumeration_guard));
  }

  const Hypothesis qstar = compute_qstar(mdp);
  Rng rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::vector<LayerTablePtr>> members(H);
  std::vector<std::size_t> optimal_choice(H);
  for (int h = 1; h <= H; ++h) {
    const std::size_t pos = std::uniform_int_distribution<std::size_t>(0, per_layer - 1)(rng);
    optimal_choice[h - 1] = pos;
    for (std::size_t i = 0; i < per_layer; ++i) {
      if (i == pos) {
        members[h - 1].push_back(qstar.layer(h));
        continue;
      }
      auto t = std::make_shared<LayerTable>();
      t->values.resize(sp.layer_size(h) * A);
      for (auto& v : t->values) {
        const double u = unit(rng);
        if (config.value_grid_resolution == 0) {
          v = u;
        } else {
          const auto res = static_cast<double>(config.value_grid_resolution);
          v = std::min(std::floor(u * (res + 1.0)), res) / res;
        }
      }
      members[h - 1].push_back(std::move(t));
    }
  }
  HypothesisClass cls(mdp.shared_space(), std::move(members),
                      config.enumeration_guard);
  const std::size_t optimal_index = cls.index_of(optimal_choice);
  return {std::move(cls), optimal_index};
}

}  // namespace ave
