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

#include "ave/ave.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ave/find_distribution.hpp"
#include "ave/oracles.hpp"

namespace ave {
namespace {

// Pops the Eliminate frame on every exit path.
class FrameGuard {
 public:
  explicit FrameGuard(std::vector<std::pair<int, int>>& frames) : frames_(frames) {}
  ~FrameGuard() { frames_.pop_back(); }
  FrameGuard(const FrameGuard&) = delete;
  FrameGuard& operator=(const FrameGuard&) = delete;

 private:
  std::vector<std::pair<int, int>>& frames_;
};

std::string describe_live(const std::vector<std::size_t>& live) {
  std::ostringstream os;
  os << "live set {";
  for (std::size_t i = 0; i < live.size(); ++i) os << (i ? "," : "") << live[i];
  os << "}";
  return os.str();
}

}  // namespace

AveAgent::AveAgent(const LayeredMdp& mdp, const HypothesisClass& cls, Schedule schedule,
                   std::size_t budget, std::uint64_t seed, AveOptions options)
    : mdp_(&mdp),
      cls_(&cls),
      schedule_(std::move(schedule)),
      options_(options),
      runner_(mdp, budget, seed),
      cache_(mdp, cls) {
  if (!(*cls.shared_space() == mdp.space())) throw ModelError("class and instance disagree on layout");
  std::vector<std::size_t> all(cls.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  set_live(std::move(all));
}

void AveAgent::set_live(std::vector<std::size_t> live) {
  std::sort(live.begin(), live.end());
  live.erase(std::unique(live.begin(), live.end()), live.end());
  if (live.empty()) throw AlgorithmFault("live set would become empty");
  live_mask_.assign(cls_->size(), 0);
  for (auto i : live) {
    if (i >= cls_->size()) throw ModelError("live index out of range");
    live_mask_[i] = 1;
  }
  live_ = std::move(live);
}

bool AveAgent::is_live(std::size_t index) const {
  return index < live_mask_.size() && live_mask_[index] != 0;
}

std::size_t AveAgent::optimistic_choice() {
  std::size_t best = live_.front();
  double best_value = predicted_root_value(cache_.member(best));
  for (auto i : live_) {
    const double v = predicted_root_value(cache_.member(i));
    if (v > best_value) {
      best = i;
      best_value = v;
    }
  }
  return best;
}

std::vector<Trajectory> AveAgent::run_greedy(std::size_t f, std::size_t count, const char* phase) {
  const Policy& p = cache_.policy(f);
  const double v = cache_.value(f);
  std::vector<Trajectory> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(runner_.run(p, v, phase));
  return out;
}

std::vector<LabeledTrajectory> AveAgent::run_mixture(const Mixture& mixture, std::size_t count,
                                                     const char* phase) {
  std::vector<LabeledTrajectory> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const Hypothesis& f = sample_mixture(mixture, runner_.rng());
    const std::size_t id = f.id();
    out.push_back({runner_.run(cache_.policy(id), cache_.value(id), phase), f});
  }
  return out;
}

Policy AveAgent::exploration_policy(std::size_t g, int h, std::size_t f, bool uniform) {
  Policy p = Policy::splice(cache_.policy(g), h, cache_.policy(f));
  if (uniform) p.set_uniform_layer(h);
  return p;
}

double AveAgent::exploration_value(std::size_t g, int h, std::size_t f, bool uniform) {
  const std::uint64_t n = cls_->size();
  const std::uint64_t key =
      ((static_cast<std::uint64_t>(g) * n + f) * 64 + static_cast<std::uint64_t>(h)) * 2 + (uniform ? 1 : 0);
  auto it = exploration_values_.find(key);
  if (it == exploration_values_.end()) {
    it = exploration_values_.emplace(key, exact_value(*mdp_, exploration_policy(g, h, f, uniform))).first;
  }
  return it->second;
}

std::vector<TransitionSample> AveAgent::run_exploration(std::size_t g, int h, const Mixture& p,
                                                        double mu, std::size_t count,
                                                        const char* phase) {
  const double uniform_prob = static_cast<double>(mdp_->num_actions()) * mu;
  std::vector<TransitionSample> out;
  out.reserve(count);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t f = sample_mixture(p, runner_.rng()).id();
    const bool uniform = unit(runner_.rng()) < uniform_prob;
    const double v = exploration_value(g, h, f, uniform);
    out.push_back(sample_at(runner_.run(exploration_policy(g, h, f, uniform), v, phase), h));
  }
  return out;
}

void AveAgent::remove_members(const std::vector<std::size_t>& doomed) {
  if (doomed.empty()) return;
  std::vector<std::size_t> keep;
  keep.reserve(live_.size());
  for (auto i : live_) {
    if (std::find(doomed.begin(), doomed.end(), i) == doomed.end()) keep.push_back(i);
  }
  if (keep.empty()) {
    throw AlgorithmFault("elimination would empty the " + describe_live(live_) +
                         "; sample sizes are probably under-scaled");
  }
  counters_.eliminations += live_.size() - keep.size();
  set_live(std::move(keep));
}

Mixture AveAgent::concatenated_mixture(std::size_t g, int h, const Mixture& p) {
  std::vector<Mixture::Entry> entries;
  entries.reserve(p.support_size());
  for (const auto& e : p.entries()) {
    entries.push_back({cache_.member(cls_->concatenate(g, h, e.hypothesis.id())), e.weight});
  }
  return Mixture(std::move(entries));
}

Mixture AveAgent::find_distribution(std::size_t g, int h, int k) {
  ++counters_.find_distribution_calls;
  const double mu = schedule_.mu(k);
  const std::size_t n = schedule_.n_cb(k - 1);
  const Policy& roll_in = cache_.policy(g);
  const double roll_in_value = cache_.value(g);
  std::vector<StateId> contexts;
  contexts.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    contexts.push_back(runner_.run(roll_in, roll_in_value, "find_distribution").at(h).state);
  }

  ActionProfile actions(live_.size(), std::vector<Action>(n));
  for (std::size_t c = 0; c < live_.size(); ++c) {
    const Hypothesis& f = cache_.member(live_[c]);
    for (std::size_t i = 0; i < n; ++i) actions[c][i] = f.greedy_action(contexts[i]);
  }
  const auto pos = std::lower_bound(live_.begin(), live_.end(), g);
  const std::size_t start = (pos != live_.end() && *pos == g) ? static_cast<std::size_t>(pos - live_.begin()) : 0;
  const std::size_t A = mdp_->num_actions();
  LowVarianceSolution sol;
  try {
    sol = solve_low_variance_distribution(actions, A, mu, start, 2.0 * static_cast<double>(A),
                                          options_.find_distribution_iteration_cap);
  } catch (const std::runtime_error& e) {
    throw AlgorithmFault(std::string("find-distribution failed: ") + e.what());
  }
  if (options_.on_find_distribution) {
    options_.on_find_distribution({g, h, k, mu, contexts, live_, sol.weights});
  }
  std::vector<Mixture::Entry> entries;
  for (std::size_t c = 0; c < live_.size(); ++c) {
    if (sol.weights[c] > 0.0) entries.push_back({cache_.member(live_[c]), sol.weights[c]});
  }
  Mixture p(std::move(entries));
  counters_.max_support = std::max(counters_.max_support, p.support_size());
  const double support_limit = 4.0 * std::log(1.0 / (static_cast<double>(A) * mu)) / mu;
  if (static_cast<double>(p.support_size()) > support_limit) {
    ++counters_.support_warnings;
    std::ostringstream os;
    os << "find-distribution support " << p.support_size() << " exceeds " << support_limit
       << " (h=" << h << ", k=" << k << ")";
    warnings_.push_back(os.str());
  }
  return p;
}

CheckResult AveAgent::check(const Mixture& mixture, int h, int j) {
  ++counters_.check_calls;
  const int H = mdp_->horizon();
  for (int k = 1; k <= j; ++k) {
    const auto trajs = run_mixture(mixture, schedule_.n_eval(k), "check");
    double total = 0.0;
    for (int hp = h + 1; hp <= H; ++hp) total += est_mixture_bellman(trajs, hp);
    if (std::abs(total) > (H - h) * schedule_.eps(k)) {
      const auto r = identify(mixture, h, k);
      return {false, r.g, r.h, r.k};
    }
  }
  return {};
}

IdentifyResult AveAgent::identify(const Mixture& mixture, int h, int k) {
  ++counters_.identify_calls;
  const int H = mdp_->horizon();
  auto by_index = [](const Mixture& m) {
    std::vector<std::size_t> ids;
    for (const auto& e : m.entries()) ids.push_back(e.hypothesis.id());
    std::sort(ids.begin(), ids.end());
    return ids;
  };
  Mixture g = mixture;
  int step = 0;
  while (g.support_size() > 1) {
    ++step;
    const auto ids = by_index(g);
    const std::size_t half = (ids.size() + 1) / 2;
    const std::vector<std::size_t> first(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(half));
    const std::vector<std::size_t> rest(ids.begin() + static_cast<std::ptrdiff_t>(half), ids.end());
    Mixture g1 = project_mixture(g, first);
    Mixture g2 = project_mixture(g, rest);
    bool chose_first = false;
    for (int l = 1; l <= k; ++l) {
      const auto trajs = run_mixture(g1, schedule_.n_id(l), "identify");
      double total = 0.0;
      for (int hp = h + 1; hp <= H; ++hp) total += est_mixture_bellman(trajs, hp);
      const double threshold =
          (H - h) * (schedule_.eps(l + 1) - (step - 0.5) * schedule_.eps_prime(l + 2));
      if (std::abs(total) > threshold) {
        g = std::move(g1);
        k = l;
        chose_first = true;
        break;
      }
    }
    if (!chose_first) g = std::move(g2);
  }

  const std::size_t gr = g.entries().front().hypothesis.id();
  const Hypothesis& f = cache_.member(gr);
  for (int l = 1; l <= k; ++l) {
    const auto trajs = run_greedy(gr, schedule_.n_id(l), "identify_final");
    int best_h = h + 1;
    double best = -1.0;
    for (int hp = h + 1; hp <= H; ++hp) {
      const double e = std::abs(est_onpolicy_bellman(trajs, f, hp));
      if (e > best) {
        best = e;
        best_h = hp;
      }
    }
    if (best > schedule_.eps(l + 2) + 0.5 * schedule_.eps_prime(l + 2)) return {gr, best_h, l};
  }
  std::ostringstream os;
  os << "identify found no layer with large error for member " << gr << " (h=" << h << ", k=" << k
     << ")";
  throw AlgorithmFault(os.str());
}

void AveAgent::eliminate(std::size_t g, int h, int j) {
  ++counters_.eliminate_calls;
  if (!frames_.empty()) {
    const auto [ph, pj] = frames_.back();
    if (!(h > ph && j < pj)) {
      std::ostringstream os;
      os << "recursive eliminate(h=" << h << ", j=" << j << ") does not shrink parent (h=" << ph
         << ", j=" << pj << ")";
      throw AlgorithmFault(os.str());
    }
  }
  if (h < 1 || h > mdp_->horizon() || j < 1) throw AlgorithmFault("eliminate called out of range");
  frames_.emplace_back(h, j);
  FrameGuard guard(frames_);
  const int depth = static_cast<int>(frames_.size());
  if (depth > std::min(mdp_->horizon(), frames_.front().second)) {
    throw AlgorithmFault("eliminate recursion deeper than min(H, j)");
  }
  counters_.max_recursion_depth = std::max(counters_.max_recursion_depth, depth);

  const int H = mdp_->horizon();
  const Hypothesis& roll_in = cache_.member(g);
  Mixture p;
  for (int k = 1; k <= j; ++k) {
    const double mu = schedule_.mu(k);
    p = find_distribution(g, h, k);
    const auto res = check(concatenated_mixture(g, h, p), h, k - 2);
    if (!res.passed) {
      eliminate(res.g, res.h, res.k + 1);
      return;
    }
    const auto samples = run_exploration(g, h, p, mu, schedule_.n_cb(k), "explore_cb");
    const auto props = propensities(samples, p, mu);
    const double reference = est_eta_is(samples, props, roll_in);
    const double cutoff = reference - (6.0 * H + 1.0) * schedule_.eps(k);
    std::vector<std::size_t> doomed;
    for (auto f : live_) {
      if (est_eta_is(samples, props, cache_.member(f)) < cutoff) doomed.push_back(f);
    }
    ++counters_.pseudo_learn_steps[{h, k}];
    remove_members(doomed);
  }

  const double mu = schedule_.mu(j);
  const auto samples = run_exploration(g, h, p, mu, schedule_.n_learn(j), "explore_learn");
  const auto props = propensities(samples, p, mu);
  std::vector<std::size_t> doomed;
  for (auto f : live_) {
    if (std::abs(est_bellman_is(samples, props, cache_.member(f))) > schedule_.phi(j)) {
      doomed.push_back(f);
    }
  }
  ++counters_.learn_steps[{h, j}];
  remove_members(doomed);
}

RunOutcome AveAgent::run() {
  const int H = mdp_->horizon();
  const int L = schedule_.levels();
  RunReport report;
  report.algorithm = "ave";
  report.budget = runner_.budget().total();
  std::size_t f = optimistic_choice();
  try {
    bool converged = false;
    while (!converged) {
      ++counters_.while_iterations;
      f = optimistic_choice();
      bool called = false;
      for (int k = 1; k <= L; ++k) {
        const auto trajs = run_greedy(f, schedule_.n_eval(k), "main_eval");
        const Hypothesis& fh = cache_.member(f);
        int worst = 1;
        double worst_abs = -1.0;
        for (int h = 1; h <= H; ++h) {
          const double e = std::abs(est_onpolicy_bellman(trajs, fh, h));
          if (e > worst_abs) {
            worst_abs = e;
            worst = h;
          }
        }
        if (worst_abs > schedule_.eps(k)) {
          ++counters_.eliminate_top_level;
          eliminate(f, worst, k);
          called = true;
          break;
        }
      }
      converged = !called;
    }
    report.termination = Termination::kConverged;
    const Policy& p = cache_.policy(f);
    const double v = cache_.value(f);
    while (!runner_.budget().exhausted()) runner_.run(p, v, "exploit");
  } catch (const BudgetExhausted&) {
    report.termination = Termination::kBudgetExhausted;
  } catch (const AlgorithmFault& e) {
    report.termination = Termination::kFault;
    report.fault = e.what();
  }
  if (runner_.ledger().size() != runner_.budget().consumed()) {
    throw std::logic_error("ledger and budget disagree on the episode count");
  }
  report.terminal_hypothesis = f;
  report.episodes_used = runner_.budget().consumed();
  report.final_cumulative_regret = runner_.ledger().cumulative_regret();
  report.counters = counters_;
  report.phase_episodes = runner_.phase_episodes();
  report.live_set = live_;
  report.warnings = warnings_;
  return {std::move(report), runner_.take_ledger()};
}

RunOutcome ave_main(const LayeredMdp& mdp, const HypothesisClass& cls, const Schedule& schedule,
                    std::size_t budget, std::uint64_t seed, AveOptions options) {
  AveAgent agent(mdp, cls, schedule, budget, seed, options);
  auto out = agent.run();
  out.report.seed = seed;
  return out;
}

}  // namespace ave
