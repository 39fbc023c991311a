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
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>

#include "ave/accounting.hpp"
#include "ave/hypothesis.hpp"
#include "ave/mdp.hpp"

namespace ave {

/// Executes episodes on behalf of one run: every episode is charged to the
/// budget first and then logged to the ledger with the exact value of the
/// policy that produced it.
class EpisodeRunner {
 public:
  EpisodeRunner(const LayeredMdp& mdp, std::size_t budget, std::uint64_t seed);

  /// Throws BudgetExhausted when no episode remains.
  Trajectory run(const Policy& policy, std::string_view phase);
  Trajectory run(const Policy& policy, double exact_value, std::string_view phase);

  const LayeredMdp& mdp() const { return *mdp_; }
  const Budget& budget() const { return budget_; }
  const RegretLedger& ledger() const { return ledger_; }
  RegretLedger take_ledger() { return std::move(ledger_); }
  Rng& rng() { return rng_; }
  const std::map<std::string, std::size_t, std::less<>>& phase_episodes() const {
    return phases_;
  }

 private:
  const LayeredMdp* mdp_;
  Budget budget_;
  RegretLedger ledger_;
  Rng rng_;
  std::map<std::string, std::size_t, std::less<>> phases_;
};

/// Greedy policies and their exact values for class members, built on
/// first use.
class PolicyCache {
 public:
  PolicyCache(const LayeredMdp& mdp, const HypothesisClass& cls) : mdp_(&mdp), cls_(&cls) {}

  const Policy& policy(std::size_t index);
  double value(std::size_t index);
  const Hypothesis& member(std::size_t index);

 private:
  struct Entry {
    Hypothesis hypothesis;
    Policy policy;
    double value;
  };
  Entry& entry(std::size_t index);

  const LayeredMdp* mdp_;
  const HypothesisClass* cls_;
  std::unordered_map<std::size_t, Entry> entries_;
};

}  // namespace ave
