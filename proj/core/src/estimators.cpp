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

#include "ave/estimators.hpp"

#include <stdexcept>
#include <string>

#include "ave/numeric.hpp"

namespace ave {

TransitionSample sample_at(const Trajectory& t, int h) {
  const auto& s = t.at(h);
  const bool terminal = h == static_cast<int>(t.steps.size());
  return {s.state, s.action, s.reward, terminal ? s.state : t.at(h + 1).state, terminal};
}

double w_plain(const Mixture& p, StateId x, Action a) {
  CompensatedSum s;
  for (const auto& e : p.entries()) {
    if (e.hypothesis.greedy_action(x) == a) s.add(e.weight);
  }
  return s.sum();
}

double w_prime(const Mixture& p, double mu, StateId x, Action a) {
  const double A = static_cast<double>(p.entries().front().hypothesis.space().num_actions());
  return (1.0 - A * mu) * w_plain(p, x, a) + mu;
}

double est_onpolicy_bellman(std::span<const Trajectory> trajs, const Hypothesis& f, int h) {
  if (trajs.empty()) throw std::invalid_argument("on-policy estimate over an empty batch");
  CompensatedSum s;
  for (const auto& t : trajs) {
    const auto& step = t.at(h);
    double next = 0.0;
    if (h < static_cast<int>(t.steps.size())) {
      const auto& n = t.at(h + 1);
      next = f.value(n.state, n.action);
    }
    s.add(f.value(step.state, step.action) - step.reward - next);
  }
  return s.mean();
}

double est_mixture_bellman(std::span<const LabeledTrajectory> trajs, int h) {
  if (trajs.empty()) throw std::invalid_argument("mixture estimate over an empty batch");
  CompensatedSum s;
  for (const auto& lt : trajs) {
    const auto& t = lt.trajectory;
    const auto& f = lt.hypothesis;
    const auto& step = t.at(h);
    double next = 0.0;
    if (h < static_cast<int>(t.steps.size())) {
      const auto& n = t.at(h + 1);
      next = f.value(n.state, n.action);
    }
    s.add(f.value(step.state, step.action) - step.reward - next);
  }
  return s.mean();
}

std::vector<double> propensities(std::span<const TransitionSample> samples, const Mixture& p,
                                 double mu) {
  std::vector<double> out;
  out.reserve(samples.size());
  for (const auto& s : samples) {
    const double w = w_prime(p, mu, s.x, s.a);
    if (w < mu * (1.0 - 1e-12)) {
      throw std::logic_error("propensity " + std::to_string(w) + " below the floor " +
                             std::to_string(mu));
    }
    out.push_back(w);
  }
  return out;
}

namespace {

double next_greedy(const Hypothesis& f, const TransitionSample& s) {
  return s.terminal ? 0.0 : f.greedy_value(s.next);
}

void check_batch(std::span<const TransitionSample> samples, std::span<const double> props) {
  if (samples.empty()) throw std::invalid_argument("importance-weighted estimate over an empty batch");
  if (samples.size() != props.size()) throw std::invalid_argument("propensity count mismatch");
}

}  // namespace

double est_eta_is(std::span<const TransitionSample> samples, std::span<const double> props,
                  const Hypothesis& f) {
  check_batch(samples, props);
  CompensatedSum s;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& p = samples[i];
    if (f.greedy_action(p.x) != p.a) {
      s.add(0.0);
      continue;
    }
    s.add((p.r + next_greedy(f, p)) / props[i]);
  }
  return s.mean();
}

double est_eta_is(std::span<const TransitionSample> samples, const Hypothesis& f,
                  const Mixture& p, double mu) {
  return est_eta_is(samples, propensities(samples, p, mu), f);
}

double est_bellman_is(std::span<const TransitionSample> samples, std::span<const double> props,
                      const Hypothesis& f) {
  check_batch(samples, props);
  CompensatedSum s;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& p = samples[i];
    if (f.greedy_action(p.x) != p.a) {
      s.add(0.0);
      continue;
    }
    s.add((f.value(p.x, p.a) - p.r - next_greedy(f, p)) / props[i]);
  }
  return s.mean();
}

double est_bellman_is(std::span<const TransitionSample> samples, const Hypothesis& f,
                      const Mixture& p, double mu) {
  return est_bellman_is(samples, propensities(samples, p, mu), f);
}

}  // namespace ave
