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

// Sample-size calibration from exact per-sample variances. The four scale
// multipliers are chosen so that each estimator's standard error meets a
// fixed fraction of the threshold it is compared against.

#pragma once

#include "ave/hypothesis.hpp"
#include "ave/mdp.hpp"
#include "ave/schedule.hpp"

namespace ave {

/// Per-sample variance bounds, all computed exactly from the tables.
struct EstimatorVariances {
  /// max over members f and layers h of Var[f(x_h,a_h) - r_h - f(x_{h+1},a_{h+1})]
  /// for an episode under pi_f.
  double onpolicy = 0.0;
  /// max over f and h < H of Var[sum_{h'>h} residual_{h'}] / (H-h)^2 under pi_f.
  double tail_sum = 0.0;
  /// 2A max over f and states x of E[(r + f(x', pi_f(x')))^2 | x, pi_f(x)].
  /// The factor 2A is the inverse-propensity bound of the exploration
  /// distribution.
  double predicted_performance = 0.0;
  /// 2A max over x of E[(f*(x,a*) - r - V*(x'))^2]: the importance-weighted
  /// residual of the optimal hypothesis.
  double optimal_residual = 0.0;
};

/// Enumerates every trajectory of every member's greedy policy; throws
/// ModelError when one policy has more than max_paths trajectories.
EstimatorVariances estimator_variances(const LayeredMdp& mdp, const HypothesisClass& cls,
                                       std::size_t max_paths = 1'000'000);

/// Standard-error targets as fractions of each threshold.
struct ErrorTargets {
  double eval = 1.0 / 6.0;      // of eps_k (on-policy and tail-sum checks)
  double cb = 1.0 / 6.0;        // of eps_k (predicted performance)
  double learn = 1.0 / 3.0;     // of phi_j (learn step)
  double identify = 1.0 / 6.0;  // of eps_{l+2} (identification)
};

/// Smallest multipliers meeting the targets. The scales inside `inputs`
/// are ignored.
ScaleMultipliers calibrated_scales(const EstimatorVariances& v, const ScheduleInputs& inputs,
                                   const ErrorTargets& targets = {});

/// Standard errors implied by a schedule at precision level i, in the units
/// of each threshold (eps_i, eps_i, phi_i, eps_{i+2}).
struct StandardErrors {
  double eval;
  double cb;
  double learn;
  double identify;
};
StandardErrors implied_standard_errors(const EstimatorVariances& v, const Schedule& schedule, int i);

}  // namespace ave
