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

#include "ave/baselines.hpp"

#include <algorithm>
#include <cmath>

#include "ave/estimators.hpp"
#include "ave/oracles.hpp"
#include "ave/runner.hpp"

namespace ave {
namespace {

void finish(RunReport& report, EpisodeRunner& runner) {
  report.episodes_used = runner.budget().consumed();
  report.budget = runner.budget().total();
  report.final_cumulative_regret = runner.ledger().cumulative_regret();
  report.phase_episodes = runner.phase_episodes();
}

}  // namespace

RunOutcome olive_baseline(const LayeredMdp& mdp, const HypothesisClass& cls, std::size_t budget,
                          const OliveOptions& options, std::uint64_t seed) {
  if (!(options.epsilon > 0.0)) throw ModelError("olive tolerance must be positive");
  const int H = mdp.horizon();
  const double A = static_cast<double>(mdp.num_actions());
  const double eps = options.epsilon;
  const std::size_t n_check =
      options.n_check ? options.n_check
                      : static_cast<std::size_t>(std::ceil(8.0 * H * H / (eps * eps)));
  const std::size_t n_explore =
      options.n_explore ? options.n_explore
                        : static_cast<std::size_t>(std::ceil(32.0 * A * H * H / (eps * eps)));

  EpisodeRunner runner(mdp, budget, seed);
  PolicyCache cache(mdp, cls);
  std::vector<std::size_t> live(cls.size());
  for (std::size_t i = 0; i < live.size(); ++i) live[i] = i;

  RunReport report;
  report.algorithm = "olive";
  report.seed = seed;
  std::size_t f = 0;
  try {
    while (true) {
      ++report.counters.while_iterations;
      f = live.front();
      for (auto i : live) {
        if (predicted_root_value(cache.member(i)) > predicted_root_value(cache.member(f))) f = i;
      }
      const Hypothesis& fh = cache.member(f);
      std::vector<Trajectory> trajs;
      trajs.reserve(n_check);
      for (std::size_t p = 0; p < n_check; ++p) {
        trajs.push_back(runner.run(cache.policy(f), cache.value(f), "verify"));
      }
      double total = 0.0;
      int worst = 1;
      double worst_abs = -1.0;
      for (int h = 1; h <= H; ++h) {
        const double e = est_onpolicy_bellman(trajs, fh, h);
        total += e;
        if (std::abs(e) > worst_abs) {
          worst_abs = std::abs(e);
          worst = h;
        }
      }
      if (std::abs(total) <= eps) break;

      Policy explore = cache.policy(f);
      explore.set_uniform_layer(worst);
      const double explore_value = exact_value(mdp, explore);
      std::vector<TransitionSample> samples;
      samples.reserve(n_explore);
      for (std::size_t p = 0; p < n_explore; ++p) {
        samples.push_back(sample_at(runner.run(explore, explore_value, "explore"), worst));
      }
      const std::vector<double> props(samples.size(), 1.0 / A);
      std::vector<std::size_t> keep;
      for (auto g : live) {
        if (std::abs(est_bellman_is(samples, props, cache.member(g))) <= eps / (2.0 * H)) {
          keep.push_back(g);
        }
      }
      ++report.counters.learn_steps[{worst, 0}];
      report.counters.eliminations += live.size() - keep.size();
      if (keep.empty()) {
        report.termination = Termination::kFault;
        report.fault = "olive elimination emptied the live set";
        report.live_set = live;
        report.terminal_hypothesis = f;
        finish(report, runner);
        return {std::move(report), runner.take_ledger()};
      }
      live = std::move(keep);
    }
    report.termination = Termination::kConverged;
    const Policy& p = cache.policy(f);
    const double v = cache.value(f);
    while (!runner.budget().exhausted()) runner.run(p, v, "exploit");
  } catch (const BudgetExhausted&) {
    report.termination = Termination::kBudgetExhausted;
  }
  report.terminal_hypothesis = f;
  report.live_set = live;
  finish(report, runner);
  return {std::move(report), runner.take_ledger()};
}

RunOutcome uniform_baseline(const LayeredMdp& mdp, std::size_t budget, std::uint64_t seed) {
  EpisodeRunner runner(mdp, budget, seed);
  const Policy p = Policy::uniform(mdp.shared_space());
  const double v = exact_value(mdp, p);
  while (!runner.budget().exhausted()) runner.run(p, v, "uniform");
  RunReport report;
  report.algorithm = "uniform";
  report.seed = seed;
  report.termination = Termination::kBudgetExhausted;
  finish(report, runner);
  return {std::move(report), runner.take_ledger()};
}

}  // namespace ave
