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

#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "ave/find_distribution.hpp"

using namespace ave;

namespace {

// Independent evaluation of mean_i 1 / ((1 - A mu) W(x_i, a_f(x_i)) + mu).
double inverse_propensity(const ActionProfile& act, const std::vector<double>& w, std::size_t f,
                          std::size_t A, double mu) {
  double total = 0.0;
  const std::size_t n = act[f].size();
  for (std::size_t i = 0; i < n; ++i) {
    double cover = 0.0;
    for (std::size_t g = 0; g < act.size(); ++g) cover += act[g][i] == act[f][i] ? w[g] : 0.0;
    total += 1.0 / ((1.0 - A * mu) * cover + mu);
  }
  return total / static_cast<double>(n);
}

ActionProfile random_profile(std::mt19937_64& gen, std::size_t F, std::size_t n, std::size_t A) {
  std::uniform_int_distribution<Action> pick(0, static_cast<Action>(A - 1));
  ActionProfile p(F, std::vector<Action>(n));
  for (auto& row : p) {
    for (auto& a : row) a = pick(gen);
  }
  return p;
}

}  // namespace

TEST_CASE("single candidate is a point mass") {
  const ActionProfile act = {{0, 1, 2, 1}};
  const double mu = 0.1;
  const auto sol = solve_low_variance_distribution(act, 3, mu, 0, 6.0, 100);
  CHECK(sol.weights == std::vector<double>{1.0});
  CHECK(sol.iterations == 0);
  CHECK(std::abs(sol.max_value - 1.0 / ((1 - 3 * mu) + mu)) <= 1e-15);
  CHECK(sol.max_value <= 6.0);
}

TEST_CASE("agreeing candidates keep the point mass on the start") {
  const ActionProfile act = {{0, 1, 2}, {0, 1, 2}, {0, 1, 2}};
  const auto sol = solve_low_variance_distribution(act, 3, 0.05, 2, 6.0, 100);
  CHECK(sol.weights[2] == 1.0);
  CHECK(sol.weights[0] == 0.0);
  CHECK(sol.iterations == 0);
}

TEST_CASE("empirical inverse propensity by hand") {
  // Two contexts, A = 2, mu = 0.1; weights (0.5, 0.5).
  const ActionProfile act = {{0, 1}, {0, 0}};
  const std::vector<double> w = {0.5, 0.5};
  // f = 0: context 1 covered by both (W = 1), context 2 by itself (W = 0.5).
  const double expected = 0.5 * (1.0 / (0.8 + 0.1) + 1.0 / (0.8 * 0.5 + 0.1));
  CHECK(std::abs(empirical_inverse_propensity(act, w, 0, 2, 0.1) - expected) <= 1e-15);
}

TEST_CASE("solutions satisfy the bound for every candidate") {
  std::mt19937_64 gen(2026);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t A = 2 + trial % 4;
    const std::size_t F = 1 + trial % 30;
    const std::size_t n = 1 + (trial * 7) % 300;
    const double mu = std::min(std::ldexp(1.0, -(1 + trial % 8)) / A, 0.5 / A);
    const auto act = random_profile(gen, F, n, A);
    const std::size_t start = static_cast<std::size_t>(trial) % F;
    const double bound = 2.0 * A;
    const auto sol = solve_low_variance_distribution(act, A, mu, start, bound, 20000);
    REQUIRE(sol.weights.size() == F);
    double total = 0.0;
    for (double x : sol.weights) {
      CHECK(x >= 0.0);
      total += x;
    }
    CHECK(std::abs(total - 1.0) <= 1e-12);
    for (std::size_t f = 0; f < F; ++f) {
      const double v = inverse_propensity(act, sol.weights, f, A, mu);
      CHECK(v <= bound * (1 + 1e-12));
      CHECK(std::abs(v - empirical_inverse_propensity(act, sol.weights, f, A, mu)) <= 1e-12);
    }
  }
}

TEST_CASE("bad arguments and infeasible bounds") {
  const ActionProfile act = {{0, 1}, {1, 0}};
  CHECK_THROWS_AS(solve_low_variance_distribution(act, 2, 0.1, 5, 4.0, 10), std::invalid_argument);
  CHECK_THROWS_AS(solve_low_variance_distribution(act, 2, 0.0, 0, 4.0, 10), std::invalid_argument);
  CHECK_THROWS_AS(solve_low_variance_distribution(act, 2, 0.6, 0, 4.0, 10), std::invalid_argument);
  CHECK_THROWS_AS(solve_low_variance_distribution({}, 2, 0.1, 0, 4.0, 10), std::invalid_argument);
  // Every W' is at most 1, so a bound below 1 is never met.
  CHECK_THROWS_AS(solve_low_variance_distribution(act, 2, 0.1, 0, 0.9, 50), std::runtime_error);
}
