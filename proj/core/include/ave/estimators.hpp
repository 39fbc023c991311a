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

// Sample-average estimators used inside the learner. All averages use
// compensated summation.

#pragma once

#include <span>
#include <vector>

#include "ave/hypothesis.hpp"
#include "ave/mdp.hpp"

namespace ave {

/// (x_h, a_h, r_h, x_{h+1}) cut from one episode; terminal on layer H.
struct TransitionSample {
  StateId x;
  Action a;
  double r;
  StateId next;
  bool terminal;
};

TransitionSample sample_at(const Trajectory& t, int h);

/// Episode paired with the hypothesis whose greedy policy generated it.
struct LabeledTrajectory {
  Trajectory trajectory;
  Hypothesis hypothesis;
};

/// W_P(x,a) = sum_f P(f) 1[pi_f(x) = a].
double w_plain(const Mixture& p, StateId x, Action a);

/// W'_P(x,a) = (1 - A mu) W_P(x,a) + mu.
double w_prime(const Mixture& p, double mu, StateId x, Action a);

/// Mean of f(x_h,a_h) - r_h - f(x_{h+1},a_{h+1}) over on-policy episodes;
/// the successor term is zero on layer H. Throws std::invalid_argument on
/// an empty batch.
double est_onpolicy_bellman(std::span<const Trajectory> trajs, const Hypothesis& f, int h);

/// Same residual, each episode scored by its own paired hypothesis.
double est_mixture_bellman(std::span<const LabeledTrajectory> trajs, int h);

/// W'_P(x_p, a_p) for every sample; throws std::logic_error if any falls
/// below mu.
std::vector<double> propensities(std::span<const TransitionSample> samples, const Mixture& p,
                                 double mu);

/// Importance-weighted predicted performance of f.
double est_eta_is(std::span<const TransitionSample> samples, std::span<const double> props,
                  const Hypothesis& f);
double est_eta_is(std::span<const TransitionSample> samples, const Hypothesis& f,
                  const Mixture& p, double mu);

/// Importance-weighted Bellman error of f under the behaviour roll-in.
double est_bellman_is(std::span<const TransitionSample> samples, std::span<const double> props,
                      const Hypothesis& f);
double est_bellman_is(std::span<const TransitionSample> samples, const Hypothesis& f,
                      const Mixture& p, double mu);

}  // namespace ave
