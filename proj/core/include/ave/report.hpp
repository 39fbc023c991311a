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
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ave/accounting.hpp"

namespace ave {

/// Invocation counters of one learner run.
struct AlgCounters {
  std::size_t while_iterations = 0;
  std::size_t eliminate_calls = 0;  // including recursive ones
  std::size_t eliminate_top_level = 0;
  std::size_t check_calls = 0;
  std::size_t identify_calls = 0;
  std::size_t find_distribution_calls = 0;
  std::map<std::pair<int, int>, std::size_t> learn_steps;         // (h, j)
  std::map<std::pair<int, int>, std::size_t> pseudo_learn_steps;  // (h, k)
  int max_recursion_depth = 0;
  std::size_t max_support = 0;
  std::size_t support_warnings = 0;
  std::size_t eliminations = 0;  // hypotheses removed from the live set
};

enum class Termination { kBudgetExhausted, kConverged, kFault };

const char* to_string(Termination t);

struct RunReport {
  std::string algorithm;
  std::uint64_t seed = 0;
  std::size_t terminal_hypothesis = 0;
  std::size_t episodes_used = 0;
  std::size_t budget = 0;
  double final_cumulative_regret = 0.0;
  AlgCounters counters;
  std::map<std::string, std::size_t, std::less<>> phase_episodes;
  Termination termination = Termination::kBudgetExhausted;
  std::vector<std::size_t> live_set;  // surviving class indices at termination
  std::vector<std::string> warnings;
  std::string fault;  // diagnostic when termination == kFault
};

struct RunOutcome {
  RunReport report;
  RegretLedger ledger;
};

/// Key-value text with nested counter sections.
void write_report(std::ostream& out, const RunReport& report);

}  // namespace ave
