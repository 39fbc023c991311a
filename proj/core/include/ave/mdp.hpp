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
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

namespace ave {

using StateId = std::uint32_t;
using Action = std::uint32_t;
using Rng = std::mt19937_64;

inline constexpr double kProbabilityTolerance = 1e-12;

/// Thrown when an instance, class, or configuration violates its contract.
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Layer layout of a layered episodic state space. Layers are numbered
/// 1..H; state ids are global and contiguous per layer, so layer h owns
/// [first_state(h), first_state(h) + layer_size(h)). The initial state x1
/// is always global id 0.
class StateSpace {
 public:
  StateSpace(std::vector<std::size_t> layer_sizes, std::size_t num_actions);

  int horizon() const { return static_cast<int>(sizes_.size()); }
  std::size_t num_actions() const { return num_actions_; }
  std::size_t num_states() const { return offsets_.back(); }
  std::size_t layer_size(int h) const { return sizes_.at(h - 1); }
  StateId first_state(int h) const { return static_cast<StateId>(offsets_.at(h - 1)); }
  int layer_of(StateId x) const;
  bool in_layer(StateId x, int h) const {
    return h >= 1 && h <= horizon() && x >= offsets_[h - 1] && x < offsets_[h];
  }
  const std::vector<std::size_t>& layer_sizes() const { return sizes_; }

  bool operator==(const StateSpace&) const = default;

 private:
  std::vector<std::size_t> sizes_;
  std::vector<std::size_t> offsets_;  // size H+1
  std::vector<int> layer_index_;      // state -> layer
  std::size_t num_actions_;
};

enum class RewardNoise { kDeterministic, kBernoulli };

/// Transition factorization p(.|x,a) = sum_m weights[x,a][m] * basis[h][m].
/// weights covers every (x,a) with x in layers 1..H-1 (row x*A + a);
/// basis[h-2] holds the M next-state distributions over layer h, h >= 2.
struct LowRankSpec {
  std::size_t rank = 0;
  std::vector<std::vector<double>> weights;
  std::vector<std::vector<std::vector<double>>> basis;
};

/// Finite layered episodic MDP with deterministic initial state and exact
/// reward and transition tables. Immutable once built.
class LayeredMdp {
 public:
  /// rewards: num_states * A means, each in [0, 1/H].
  /// transitions: one row per (x, a) in row-major order, each a distribution
  /// over the next layer (empty for layer-H states). Rows within 1e-12 of
  /// a distribution are kept verbatim so files round-trip bit for bit;
  /// anything else is rejected.
  LayeredMdp(StateSpace space, std::vector<double> rewards,
             std::vector<std::vector<double>> transitions,
             RewardNoise noise = RewardNoise::kDeterministic,
             std::optional<LowRankSpec> low_rank = std::nullopt);

  const StateSpace& space() const { return *space_; }
  std::shared_ptr<const StateSpace> shared_space() const { return space_; }
  int horizon() const { return space_->horizon(); }
  std::size_t num_actions() const { return space_->num_actions(); }
  std::size_t num_states() const { return space_->num_states(); }
  StateId initial_state() const { return 0; }

  double reward(StateId x, Action a) const { return rewards_[x * num_actions() + a]; }
  /// Next-layer distribution indexed by local state index in layer h+1.
  std::span<const double> transition(StateId x, Action a) const {
    return transitions_[x * num_actions() + a];
  }
  RewardNoise noise() const { return noise_; }
  const std::optional<LowRankSpec>& low_rank() const { return low_rank_; }

  /// Same tables with a different reward noise mode.
  LayeredMdp with_noise(RewardNoise noise) const;

 private:
  std::shared_ptr<const StateSpace> space_;
  std::vector<double> rewards_;
  std::vector<std::vector<double>> transitions_;
  RewardNoise noise_;
  std::optional<LowRankSpec> low_rank_;
};

/// Per-state action distribution. A row may be left undefined; rolling out
/// into such a state is a hard fault.
class Policy {
 public:
  static constexpr std::int32_t kUndefined = -2;
  static constexpr std::int32_t kStochastic = -1;

  explicit Policy(std::shared_ptr<const StateSpace> space);

  static Policy deterministic(std::shared_ptr<const StateSpace> space,
                              std::span<const Action> actions);
  static Policy uniform(std::shared_ptr<const StateSpace> space);
  /// Layers < h from lower, layers >= h from upper.
  static Policy splice(const Policy& lower, int h, const Policy& upper);

  void set_action(StateId x, Action a);
  void set_distribution(StateId x, std::span<const double> probs);
  /// Overwrites every state of layer h with the uniform distribution.
  void set_uniform_layer(int h);

  bool defined(StateId x) const { return kind_[x] != kUndefined; }
  /// Deterministic action, or nullopt for stochastic/undefined rows.
  std::optional<Action> action(StateId x) const {
    return kind_[x] >= 0 ? std::optional<Action>(static_cast<Action>(kind_[x])) : std::nullopt;
  }
  double prob(StateId x, Action a) const;
  Action sample(StateId x, Rng& rng) const;

  const StateSpace& space() const { return *space_; }
  const std::shared_ptr<const StateSpace>& shared_space() const { return space_; }

 private:
  std::shared_ptr<const StateSpace> space_;
  std::vector<std::int32_t> kind_;
  std::vector<double> probs_;  // num_states * A, meaningful for stochastic rows
};

struct Step {
  StateId state;
  Action action;
  double reward;
};

/// One episode: exactly H steps starting at x1.
struct Trajectory {
  std::vector<Step> steps;
  const Step& at(int h) const { return steps.at(h - 1); }
};

/// Distribution over the states of one layer (local indices).
struct StateDist {
  int layer;
  std::vector<double> probs;
};

/// Samples one episode. Throws std::logic_error when the policy is
/// undefined on a visited state.
Trajectory rollout(const LayeredMdp& mdp, const Policy& policy, Rng& rng);

}  // namespace ave
