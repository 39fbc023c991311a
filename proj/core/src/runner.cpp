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

#include "ave/runner.hpp"

#include "ave/oracles.hpp"

namespace ave {

EpisodeRunner::EpisodeRunner(const LayeredMdp& mdp, std::size_t budget, std::uint64_t seed)
    : mdp_(&mdp), budget_(budget), ledger_(optimal_value(mdp)), rng_(seed) {}

Trajectory EpisodeRunner::run(const Policy& policy, std::string_view phase) {
  return run(policy, exact_value(*mdp_, policy), phase);
}

Trajectory EpisodeRunner::run(const Policy& policy, double exact_value, std::string_view phase) {
  budget_.consume();
  auto t = rollout(*mdp_, policy, rng_);
  ledger_.record(phase, exact_value);
  auto it = phases_.find(phase);
  if (it == phases_.end()) it = phases_.emplace(std::string(phase), 0).first;
  ++it->second;
  return t;
}

PolicyCache::Entry& PolicyCache::entry(std::size_t index) {
  auto it = entries_.find(index);
  if (it == entries_.end()) {
    auto f = cls_->member(index);
    auto p = f.greedy_policy();
    const double v = exact_value(*mdp_, p);
    it = entries_.emplace(index, Entry{std::move(f), std::move(p), v}).first;
  }
  return it->second;
}

const Policy& PolicyCache::policy(std::size_t index) { return entry(index).policy; }
double PolicyCache::value(std::size_t index) { return entry(index).value; }
const Hypothesis& PolicyCache::member(std::size_t index) { return entry(index).hypothesis; }

}  // namespace ave
