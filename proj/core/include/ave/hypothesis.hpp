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
#include <limits>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "ave/mdp.hpp"

namespace ave {

/// Action values of one layer: layer_size * A entries, row-major by local
/// state index.
struct LayerTable {
  std::vector<double> values;
};

using LayerTablePtr = std::shared_ptr<const LayerTable>;

inline constexpr std::size_t kNoId = std::numeric_limits<std::size_t>::max();

/// Per-layer action-value tables in [0,1]. Layer H+1 reads as zero.
/// Copies share the underlying tables.
class Hypothesis {
 public:
  Hypothesis(std::shared_ptr<const StateSpace> space, std::vector<LayerTablePtr> layers,
             std::size_t id = kNoId);

  /// Dense table over all states, num_states * A entries.
  static Hypothesis from_dense(std::shared_ptr<const StateSpace> space,
                               std::span<const double> values, std::size_t id = kNoId);

  double value(StateId x, Action a) const;
  /// argmax_a f(x,a), ties to the lowest action index.
  Action greedy_action(StateId x) const;
  /// f(x, greedy_action(x)).
  double greedy_value(StateId x) const;
  /// greedy_value of a successor; zero beyond layer H.
  double greedy_value_or_zero(StateId x, int layer) const {
    return layer > space_->horizon() ? 0.0 : greedy_value(x);
  }

  std::size_t id() const { return id_; }
  const StateSpace& space() const { return *space_; }
  const std::shared_ptr<const StateSpace>& shared_space() const { return space_; }
  const LayerTablePtr& layer(int h) const { return layers_.at(h - 1); }

  /// Deterministic greedy policy pi_f.
  Policy greedy_policy() const;

 private:
  std::span<const double> row(StateId x) const;

  std::shared_ptr<const StateSpace> space_;
  std::vector<LayerTablePtr> layers_;
  std::size_t id_;
};

/// Hypotheses are identified by class index, not by value.
inline bool same_member(const Hypothesis& a, const Hypothesis& b) {
  return a.id() != kNoId && a.id() == b.id();
}

/// f(x1, pi_f(x1)).
double predicted_root_value(const Hypothesis& f);

/// Layers < h from f1, layers >= h from f2; 1 <= h <= H+1. The result
/// carries no class id; use HypothesisClass::concatenate for members.
Hypothesis concatenate(const Hypothesis& f1, int h, const Hypothesis& f2);

/// Product class F_1 x ... x F_H enumerated by mixed-radix index; the layer-1
/// choice is the most significant digit, so index order is lexicographic in
/// the per-layer choice vector.
class HypothesisClass {
 public:
  static constexpr std::size_t kDefaultEnumerationGuard = 1'000'000;

  HypothesisClass(std::shared_ptr<const StateSpace> space,
                  std::vector<std::vector<LayerTablePtr>> layer_members,
                  std::size_t enumeration_guard = kDefaultEnumerationGuard);

  std::size_t size() const { return size_; }
  int horizon() const { return static_cast<int>(members_.size()); }
  std::size_t layer_count(int h) const { return members_.at(h - 1).size(); }
  const std::vector<LayerTablePtr>& layer_members(int h) const { return members_.at(h - 1); }

  Hypothesis member(std::size_t index) const;
  std::vector<std::size_t> choices(std::size_t index) const;
  std::size_t index_of(std::span<const std::size_t> choices) const;

  /// Index of member(i) o_h member(j).
  std::size_t concatenate(std::size_t i, int h, std::size_t j) const;
  Hypothesis concatenate(const Hypothesis& f1, int h, const Hypothesis& f2) const {
    return member(concatenate(f1.id(), h, f2.id()));
  }

  const std::shared_ptr<const StateSpace>& shared_space() const { return space_; }

 private:
  std::shared_ptr<const StateSpace> space_;
  std::vector<std::vector<LayerTablePtr>> members_;
  std::vector<std::size_t> strides_;
  std::size_t size_;
};

/// Finite distribution over distinct hypotheses.
class Mixture {
 public:
  struct Entry {
    Hypothesis hypothesis;
    double weight;
  };

  Mixture() = default;
  /// Entries with the same id are merged; zero weights are dropped; the
  /// total is renormalized to 1. Rejects negative weights or zero mass.
  explicit Mixture(std::vector<Entry> entries);

  static Mixture point_mass(Hypothesis f) { return Mixture({{std::move(f), 1.0}}); }

  const std::vector<Entry>& entries() const { return entries_; }
  std::size_t support_size() const { return entries_.size(); }
  /// Weight on the member with this id, or 0.
  double weight_of(std::size_t id) const;

 private:
  std::vector<Entry> entries_;
};

/// G restricted to members whose id is in subset, renormalized.
/// Throws ModelError when the subset carries zero mass.
Mixture project_mixture(const Mixture& g, std::span<const std::size_t> subset);

const Hypothesis& sample_mixture(const Mixture& g, Rng& rng);

}  // namespace ave
