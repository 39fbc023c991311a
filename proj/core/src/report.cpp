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

#include "ave/report.hpp"

#include <ostream>

#include "ave/serialization.hpp"

namespace ave {

const char* to_string(Termination t) {
  switch (t) {
    case Termination::kBudgetExhausted:
      return "budget_exhausted";
    case Termination::kConverged:
      return "converged";
    case Termination::kFault:
      return "fault";
  }
  return "unknown";
}

void write_report(std::ostream& out, const RunReport& r) {
  out << "algorithm = " << r.algorithm << '\n'
      << "seed = " << r.seed << '\n'
      << "termination = " << to_string(r.termination) << '\n'
      << "terminal_hypothesis = " << r.terminal_hypothesis << '\n'
      << "episodes_used = " << r.episodes_used << '\n'
      << "budget = " << r.budget << '\n'
      << "final_cumulative_regret = " << format_real(r.final_cumulative_regret) << '\n';
  out << "live_set =";
  for (auto i : r.live_set) out << ' ' << i;
  out << '\n';
  if (!r.fault.empty()) out << "fault = " << r.fault << '\n';

  const auto& c = r.counters;
  out << "\n[counters]\n"
      << "while_iterations = " << c.while_iterations << '\n'
      << "eliminate_calls = " << c.eliminate_calls << '\n'
      << "eliminate_top_level = " << c.eliminate_top_level << '\n'
      << "check_calls = " << c.check_calls << '\n'
      << "identify_calls = " << c.identify_calls << '\n'
      << "find_distribution_calls = " << c.find_distribution_calls << '\n'
      << "max_recursion_depth = " << c.max_recursion_depth << '\n'
      << "max_support = " << c.max_support << '\n'
      << "support_warnings = " << c.support_warnings << '\n'
      << "eliminations = " << c.eliminations << '\n';
  out << "\n[counters.learn_steps]\n";
  for (const auto& [key, n] : c.learn_steps) out << "h" << key.first << ".j" << key.second << " = " << n << '\n';
  out << "\n[counters.pseudo_learn_steps]\n";
  for (const auto& [key, n] : c.pseudo_learn_steps) {
    out << "h" << key.first << ".k" << key.second << " = " << n << '\n';
  }
  out << "\n[phase_episodes]\n";
  for (const auto& [phase, n] : r.phase_episodes) out << phase << " = " << n << '\n';
  if (!r.warnings.empty()) {
    out << "\n[warnings]\n";
    for (std::size_t i = 0; i < r.warnings.size(); ++i) out << i << " = " << r.warnings[i] << '\n';
  }
}

}  // namespace ave
