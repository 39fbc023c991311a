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

#include "ave/hypothesis.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <unordered_map>

namespace ave {

Hypothesis::Hypothesis(std::shared_ptr<const StateSpace> space, std::vector<LayerTablePtr> layers,
                       std::size_t id)
    : space_(std::move(space)), layers_(std::move(layers)), id_(id) {
  if (layers_.size() != static_cast<std::size_t>(space_->horizon())) {
    throw ModelError("hypothesis needs one table per layer");
  }
  for (int h = 1; h <= space_->horizon(); ++h) {
    const auto& t = layers_[h - 1];
    if (!t || t->values.size() != space_->layer_size(h) * space_->num_actions()) {
      throw ModelError("hypothesis table of layer " + std::to_string(h) + " has the wrong size");
    }
  }
}

Hypothesis Hypothesis::from_dense(std::shared_ptr<const StateSpace> space,
                                  std::span<const double> values, std::size_t id) {
  const std::size_t A = space->num_actions();
  if (values.size() != space->num_states() * A) throw ModelError("dense table has the wrong size");
  std::vector<LayerTablePtr> layers;
  for (int h = 1; h <= space->horizon(); ++h) {
    const auto first = values.begin() + space->first_state(h) * A;
    auto t = std::make_shared<LayerTable>();
    t->values.assign(first, first + space->layer_size(h) * A);
    layers.push_back(std::move(t));
  }
  return Hypothesis(std::move(space), std::move(layers), id);
}

std::span<const double> Hypothesis::row(StateId x) const {
  const int h = space_->layer_of(x);
  const std::size_t A = space_->num_actions();
  const std::size_t local = x - space_->first_state(h);
  return std::span<const double>(layers_[h - 1]->values).subspan(local * A, A);
}

double Hypothesis::value(StateId x, Action a) const { return row(x)[a]; }

Action Hypothesis::greedy_action(StateId x) const {
  const auto r = row(x);
  Action best = 0;
  for (Action a = 1; a < r.size(); ++a) {
    if (r[a] > r[best]) best = a;
  }
  return best;
}

double Hypothesis::greedy_value(StateId x) const { return row(x)[greedy_action(x)]; }

Policy Hypothesis::greedy_policy() const {
  Policy p(space_);
  for (StateId x = 0; x < space_->num_states(); ++x) p.set_action(x, greedy_action(x));
  return p;
}

double predicted_root_value(const Hypothesis& f) { return f.greedy_value(0); }

Hypothesis concatenate(const Hypothesis& f1, int h, const Hypothesis& f2) {
  const int H = f1.space().horizon();
  if (h < 1 || h > H + 1) throw ModelError("concatenation layer out of range");
  std::vector<LayerTablePtr> layers;
  for (int l = 1; l <= H; ++l) layers.push_back(l < h ? f1.layer(l) : f2.layer(l));
  return Hypothesis(f1.shared_space(), std::move(layers));
}

HypothesisClass::HypothesisClass(std::shared_ptr<const StateSpace> space,
                                 std::vector<std::vector<LayerTablePtr>> layer_members,
                                 std::size_t enumeration_guard)
    : space_(std::move(space)), members_(std::move(layer_members)) {
  const int H = space_->horizon();
  if (members_.size() != static_cast<std::size_t>(H)) {
    throw ModelError("hypothesis class needs one member set per layer");
  }
  const std::size_t A = space_->num_actions();
  long double product = 1.0L;
  for (int h = 1; h <= H; ++h) {
    const auto& set = members_[h - 1];
    if (set.empty()) throw ModelError("layer " + std::to_string(h) + " has no members");
    for (const auto& t : set) {
      if (!t || t->values.size() != space_->layer_size(h) * A) {
        throw ModelError("member table of layer " + std::to_string(h) + " has the wrong size");
      }
      for (double v : t->values) {
        if (!(v >= 0.0 && v <= 1.0)) throw ModelError("hypothesis value outside [0,1]");
      }
    }
    product *= static_cast<long double>(set.size());
  }
  if (product > static_cast<long double>(enumeration_guard)) {
    throw ModelError("product class of size " + std::to_string(static_cast<double>(product)) +
                     " exceeds the enumeration guard " + std::to_string(enumeration_guard));
  }
  size_ = static_cast<std::size_t>(product);
  strides_.assign(H, 1);
  for (int h = H - 1; h >= 1; --h) strides_[h - 1] = strides_[h] * members_[h].size();
}

std::vector<std::size_t> HypothesisClass::choices(std::size_t index) const {
  if (index >= size_) throw ModelError("class index out of range");
  std::vector<std::size_t> c(members_.size());
  for (std::size_t l = 0; l < members_.size(); ++l) {
    c[l] = index / strides_[l];
    index %= strides_[l];
  }
  return c;
}

std::size_t HypothesisClass::index_of(std::span<const std::size_t> choices) const {
  if (choices.size() != members_.size()) throw ModelError("choice vector has the wrong length");
  std::size_t index = 0;
  for (std::size_t l = 0; l < members_.size(); ++l) {
    if (choices[l] >= members_[l].size()) throw ModelError("layer choice out of range");
    index += choices[l] * strides_[l];
  }
  return index;
}

Hypothesis HypothesisClass::member(std::size_t index) const {
  const auto c = choices(index);
  std::vector<LayerTablePtr> layers;
  layers.reserve(c.size());
  for (std::size_t l = 0; l < c.size(); ++l) layers.push_back(members_[l][c[l]]);
  return Hypothesis(space_, std::move(layers), index);
}

std::size_t HypothesisClass::concatenate(std::size_t i, int h, std::size_t j) const {
  const int H = horizon();
  if (h < 1 || h > H + 1) throw ModelError("concatenation layer out of range");
  const auto ci = choices(i);
  auto cj = choices(j);
  for (int l = 1; l < h; ++l) cj[l - 1] = ci[l - 1];
  return index_of(cj);
}

Mixture::Mixture(std::vector<Entry> entries) {
  double total = 0.0;
  std::unordered_map<std::size_t, std::size_t> position;
  for (auto& e : entries) {
    if (!(e.weight >= 0.0)) throw ModelError("mixture weight is negative");
    if (e.weight == 0.0) continue;
    if (e.hypothesis.id() != kNoId) {
      auto [it, inserted] = position.emplace(e.hypothesis.id(), entries_.size());
      if (!inserted) {
        entries_[it->second].weight += e.weight;
        total += e.weight;
        continue;
      }
    }
    total += e.weight;
    entries_.push_back(std::move(e));
  }
  if (!(total > 0.0)) throw ModelError("mixture has no mass");
  for (auto& e : entries_) e.weight /= total;
}

double Mixture::weight_of(std::size_t id) const {
  for (const auto& e : entries_) {
    if (e.hypothesis.id() == id) return e.weight;
  }
  return 0.0;
}

Mixture project_mixture(const Mixture& g, std::span<const std::size_t> subset) {
  std::vector<Mixture::Entry> kept;
  double mass = 0.0;
  for (const auto& e : g.entries()) {
    if (std::find(subset.begin(), subset.end(), e.hypothesis.id()) != subset.end()) {
      kept.push_back(e);
      mass += e.weight;
    }
  }
  if (!(mass > 0.0)) throw ModelError("projection onto a subset with zero mass");
  return Mixture(std::move(kept));
}

const Hypothesis& sample_mixture(const Mixture& g, Rng& rng) {
  const auto& entries = g.entries();
  if (entries.empty()) throw ModelError("sampling an empty mixture");
  const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  double acc = 0.0;
  for (const auto& e : entries) {
    acc += e.weight;
    if (u < acc) return e.hypothesis;
  }
  return entries.back().hypothesis;
}

}  // namespace ave
