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

// Adaptive value-function elimination: the main optimistic loop and its
// Eliminate / Check / Identify / Find-Distribution procedures.

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ave/estimators.hpp"
#include "ave/hypothesis.hpp"
#include "ave/mdp.hpp"
#include "ave/report.hpp"
#include "ave/runner.hpp"
#include "ave/schedule.hpp"

namespace ave {

/// Raised when a procedure reaches a state its analysis rules out (empty
/// live set, Identify falling through, recursion not shrinking). Usually a
/// sign of under-scaled sample sizes.
class AlgorithmFault : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// What one Find-Distribution call saw and returned.
struct FindDistributionTrace {
  std::size_t g;
  int h;
  int k;
  double mu;
  std::vector<StateId> contexts;
  std::vector<std::size_t> live;  // candidates, ascending class index
  std::vector<double> weights;    // aligned with live
};

struct AveOptions {
  std::size_t find_distribution_iteration_cap = 20'000;
  /// Called after every Find-Distribution solve; for instrumentation.
  std::function<void(const FindDistributionTrace&)> on_find_distribution;
};

struct CheckResult {
  bool passed = true;
  std::size_t g = kNoId;  // class index of g_r when !passed
  int h = 0;
  int k = 0;
};

struct IdentifyResult {
  std::size_t g;  // class index
  int h;
  int k;
};

/// Mutable state of one learner run: the live hypothesis set, schedule,
/// budget, ledger, RNG, and counters. Single owner.
class AveAgent {
 public:
  AveAgent(const LayeredMdp& mdp, const HypothesisClass& cls, Schedule schedule,
           std::size_t budget, std::uint64_t seed, AveOptions options = {});

  /// Runs the optimistic main loop, then exploits until the budget is used.
  RunOutcome run();

  /// Eliminate(g, h, j). g is a class index.
  void eliminate(std::size_t g, int h, int j);
  /// Check(G, h, j); G must be supported on class members.
  CheckResult check(const Mixture& mixture, int h, int j);
  /// Identify(G, h, k).
  IdentifyResult identify(const Mixture& mixture, int h, int k);
  /// Find-Distribution(g, h, k): P_k over the live set.
  Mixture find_distribution(std::size_t g, int h, int k);

  /// OFU pick: argmax of predicted_root_value over the live set, ties to the
  /// lowest index.
  std::size_t optimistic_choice();

  const std::vector<std::size_t>& live() const { return live_; }
  void set_live(std::vector<std::size_t> live);
  bool is_live(std::size_t index) const;

  const AlgCounters& counters() const { return counters_; }
  const Schedule& schedule() const { return schedule_; }
  const EpisodeRunner& runner() const { return runner_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

 private:
  std::vector<Trajectory> run_greedy(std::size_t f, std::size_t count, const char* phase);
  std::vector<LabeledTrajectory> run_mixture(const Mixture& mixture, std::size_t count,
                                             const char* phase);
  /// Eliminate's behaviour policy: roll in pi_g below h; at layer h act
  /// uniformly with probability A mu, else by f ~ P; f continues above h.
  std::vector<TransitionSample> run_exploration(std::size_t g, int h, const Mixture& p, double mu,
                                                std::size_t count, const char* phase);
  Policy exploration_policy(std::size_t g, int h, std::size_t f, bool uniform);
  double exploration_value(std::size_t g, int h, std::size_t f, bool uniform);
  void remove_members(const std::vector<std::size_t>& doomed);
  Mixture concatenated_mixture(std::size_t g, int h, const Mixture& p);

  const LayeredMdp* mdp_;
  const HypothesisClass* cls_;
  Schedule schedule_;
  AveOptions options_;
  EpisodeRunner runner_;
  PolicyCache cache_;
  std::vector<std::size_t> live_;
  std::vector<char> live_mask_;
  AlgCounters counters_;
  std::vector<std::string> warnings_;
  std::vector<std::pair<int, int>> frames_;  // (h, j) of active Eliminate calls
  std::unordered_map<std::uint64_t, double> exploration_values_;
};

/// AveAgent(mdp, cls, schedule, budget, seed, options).run().
RunOutcome ave_main(const LayeredMdp& mdp, const HypothesisClass& cls, const Schedule& schedule,
                    std::size_t budget, std::uint64_t seed, AveOptions options = {});

}  // namespace ave
