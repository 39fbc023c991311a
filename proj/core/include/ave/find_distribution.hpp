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

// Low-variance exploration distribution over a finite policy set.
//
// Given contexts x^1..x^n and, for every candidate f, the action pi_f(x^i),
// find P with
//   (1/n) sum_i 1 / ((1 - A mu) W_P(x^i, pi_f(x^i)) + mu) <= bound
// for every candidate f.

#pragma once

#include <cstddef>
#include <vector>

#include "ave/mdp.hpp"

namespace ave {

/// actions[f][i] = pi_f(x^i).
using ActionProfile = std::vector<std::vector<Action>>;

/// Empirical mean of 1/W'_P(x, pi_f(x)) over the contexts.
double empirical_inverse_propensity(const ActionProfile& actions, const std::vector<double>& weights,
                                    std::size_t f, std::size_t num_actions, double mu);

struct LowVarianceSolution {
  std::vector<double> weights;  // over candidates
  std::size_t iterations = 0;
  double max_value = 0.0;       // max_f empirical_inverse_propensity
};

/// Coordinate descent from the point mass on `start`: while some candidate
/// violates the bound, add mass (V + (V - bound)) / (2 (1 - A mu) S) to the
/// worst one, where V and S are its empirical first and second inverse
/// propensity moments, and rescale whenever the total exceeds one. Leftover
/// mass returns to `start`. Throws std::runtime_error after iteration_cap
/// steps without feasibility.
LowVarianceSolution solve_low_variance_distribution(const ActionProfile& actions,
                                                    std::size_t num_actions, double mu,
                                                    std::size_t start, double bound,
                                                    std::size_t iteration_cap);

}  // namespace ave
