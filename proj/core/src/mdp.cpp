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

#include "ave/mdp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace ave {

StateSpace::StateSpace(std::vector<std::size_t> layer_sizes, std::size_t num_actions)
    : sizes_(std::move(layer_sizes)), num_actions_(num_actions) {
  if (sizes_.empty()) throw ModelError("state space needs at least one layer");
  if (num_actions_ == 0) throw ModelError("state space needs at least one action");
  offsets_.assign(sizes_.size() + 1, 0);
  for (std::size_t h = 0; h < sizes_.size(); ++h) {
    if (sizes_[h] == 0) throw ModelError("layer " + std::to_string(h + 1) + " has no states");
    offsets_[h + 1] = offsets_[h] + sizes_[h];
  }
  layer_index_.resize(offsets_.back());
  for (std::size_t h = 0; h < sizes_.size(); ++h) {
    std::fill(layer_index_.begin() + offsets_[h], layer_index_.begin() + offsets_[h + 1],
              static_cast<int>(h + 1));
  }
}

int StateSpace::layer_of(StateId x) const {
  if (x >= layer_index_.size()) throw ModelError("state id out of range");
  return layer_index_[x];
}

namespace {

void check_distribution(const std::vector<double>& row, const std::string& what) {
  double total = 0.0;
  for (double p : row) {
    if (!(p >= 0.0)) throw ModelError(what + " has a negative or NaN entry");
    total += p;
  }
  if (std::abs(total - 1.0) > kProbabilityTolerance) {
    throw ModelError(what + " sums to " + std::to_string(total));
  }
}

}  // namespace

LayeredMdp::LayeredMdp(StateSpace space, std::vector<double> rewards,
                       std::vector<std::vector<double>> transitions, RewardNoise noise,
                       std::optional<LowRankSpec> low_rank)
    : space_(std::make_shared<const StateSpace>(std::move(space))),
      rewards_(std::move(rewards)),
      transitions_(std::move(transitions)),
      noise_(noise),
      low_rank_(std::move(low_rank)) {
  const std::size_t A = space_->num_actions();
  const int H = space_->horizon();
  const std::size_t rows = space_->num_states() * A;
  if (rewards_.size() != rows) throw ModelError("reward table has the wrong size");
  if (transitions_.size() != rows) throw ModelError("transition table has the wrong size");
  const double r_max = 1.0 / H;
  for (std::size_t x = 0; x < space_->num_states(); ++x) {
    const int h = space_->layer_of(static_cast<StateId>(x));
    for (std::size_t a = 0; a < A; ++a) {
      const std::size_t i = x * A + a;
      const double r = rewards_[i];
      if (!(r >= 0.0) || r > r_max + 1e-15) {
        throw ModelError("reward of state " + std::to_string(x) + " outside [0, 1/H]");
      }
      rewards_[i] = std::min(r, r_max);
      auto& row = transitions_[i];
      if (h == H) {
        if (!row.empty()) throw ModelError("layer-H state has a transition row");
        continue;
      }
      if (row.size() != space_->layer_size(h + 1)) {
        throw ModelError("transition row of state " + std::to_string(x) +
                         " does not match the next layer");
      }
      check_distribution(row, "transition row of state " + std::to_string(x));
    }
  }
  if (low_rank_) {
    const auto& lr = *low_rank_;
    if (lr.rank == 0) throw ModelError("low-rank spec with rank 0");
    if (lr.basis.size() != static_cast<std::size_t>(H - 1)) {
      throw ModelError("low-rank spec needs one basis set per layer 2..H");
    }
    for (int h = 2; h <= H; ++h) {
      const auto& b = lr.basis[h - 2];
      if (b.size() != lr.rank) throw ModelError("low-rank basis has the wrong count");
      for (const auto& psi : b) {
        if (psi.size() != space_->layer_size(h)) throw ModelError("basis row has the wrong size");
      }
    }
    const std::size_t weighted = space_->first_state(H) * A;
    if (lr.weights.size() != weighted) throw ModelError("low-rank weights have the wrong size");
  }
}

LayeredMdp LayeredMdp::with_noise(RewardNoise noise) const {
  LayeredMdp copy = *this;
  copy.noise_ = noise;
  return copy;
}

Policy::Policy(std::shared_ptr<const StateSpace> space)
    : space_(std::move(space)),
      kind_(space_->num_states(), kUndefined),
      probs_(space_->num_states() * space_->num_actions(), 0.0) {}

Policy Policy::deterministic(std::shared_ptr<const StateSpace> space,
                             std::span<const Action> actions) {
  Policy p(std::move(space));
  if (actions.size() != p.space().num_states()) throw ModelError("action list has the wrong size");
  for (std::size_t x = 0; x < actions.size(); ++x) p.set_action(static_cast<StateId>(x), actions[x]);
  return p;
}

Policy Policy::uniform(std::shared_ptr<const StateSpace> space) {
  Policy p(std::move(space));
  for (int h = 1; h <= p.space().horizon(); ++h) p.set_uniform_layer(h);
  return p;
}

Policy Policy::splice(const Policy& lower, int h, const Policy& upper) {
  Policy p = upper;
  const auto& s = lower.space();
  const std::size_t A = s.num_actions();
  const std::size_t end = h > s.horizon() ? s.num_states() : s.first_state(std::max(h, 1));
  for (std::size_t x = 0; x < end && h > 1; ++x) {
    p.kind_[x] = lower.kind_[x];
    std::copy_n(lower.probs_.begin() + x * A, A, p.probs_.begin() + x * A);
  }
  return p;
}

void Policy::set_action(StateId x, Action a) {
  const std::size_t A = space_->num_actions();
  if (a >= A) throw ModelError("action out of range");
  kind_.at(x) = static_cast<std::int32_t>(a);
  std::fill_n(probs_.begin() + x * A, A, 0.0);
  probs_[x * A + a] = 1.0;
}

void Policy::set_distribution(StateId x, std::span<const double> probs) {
  const std::size_t A = space_->num_actions();
  if (probs.size() != A) throw ModelError("action distribution has the wrong size");
  std::vector<double> row(probs.begin(), probs.end());
  check_distribution(row, "action distribution");
  kind_.at(x) = kStochastic;
  std::copy(row.begin(), row.end(), probs_.begin() + x * A);
}

void Policy::set_uniform_layer(int h) {
  const std::size_t A = space_->num_actions();
  const StateId first = space_->first_state(h);
  for (StateId x = first; x < first + space_->layer_size(h); ++x) {
    if (A == 1) {
      set_action(x, 0);
      continue;
    }
    kind_[x] = kStochastic;
    std::fill_n(probs_.begin() + x * A, A, 1.0 / static_cast<double>(A));
  }
}

double Policy::prob(StateId x, Action a) const {
  if (kind_[x] == kUndefined) throw std::logic_error("policy undefined on state " + std::to_string(x));
  return probs_[x * space_->num_actions() + a];
}

Action Policy::sample(StateId x, Rng& rng) const {
  const std::int32_t k = kind_[x];
  if (k >= 0) return static_cast<Action>(k);
  if (k == kUndefined) throw std::logic_error("policy undefined on state " + std::to_string(x));
  const std::size_t A = space_->num_actions();
  const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  double acc = 0.0;
  for (std::size_t a = 0; a + 1 < A; ++a) {
    acc += probs_[x * A + a];
    if (u < acc) return static_cast<Action>(a);
  }
  return static_cast<Action>(A - 1);
}

Trajectory rollout(const LayeredMdp& mdp, const Policy& policy, Rng& rng) {
  const int H = mdp.horizon();
  const auto& space = mdp.space();
  Trajectory t;
  t.steps.reserve(static_cast<std::size_t>(H));
  StateId x = mdp.initial_state();
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int h = 1; h <= H; ++h) {
    const Action a = policy.sample(x, rng);
    double r = mdp.reward(x, a);
    if (mdp.noise() == RewardNoise::kBernoulli) {
      r = unit(rng) < r * H ? 1.0 / H : 0.0;
    }
    t.steps.push_back({x, a, r});
    if (h == H) break;
    const auto row = mdp.transition(x, a);
    const double u = unit(rng);
    double acc = 0.0;
    std::size_t next = row.size();
    std::size_t last_positive = 0;
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (row[i] <= 0.0) continue;
      last_positive = i;
      acc += row[i];
      if (u < acc) {
        next = i;
        break;
      }
    }
    if (next == row.size()) next = last_positive;
    x = space.first_state(h + 1) + static_cast<StateId>(next);
  }
  return t;
}

}  // namespace ave
