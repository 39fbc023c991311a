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

#include "ave/find_distribution.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>

#include "ave/numeric.hpp"

namespace ave {

double empirical_inverse_propensity(const ActionProfile& actions, const std::vector<double>& weights,
                                    std::size_t f, std::size_t num_actions, double mu) {
  const std::size_t n = actions.at(f).size();
  if (n == 0) return 0.0;
  const double scale = 1.0 - static_cast<double>(num_actions) * mu;
  CompensatedSum s;
  for (std::size_t i = 0; i < n; ++i) {
    double w = 0.0;
    for (std::size_t g = 0; g < actions.size(); ++g) {
      if (weights[g] != 0.0 && actions[g][i] == actions[f][i]) w += weights[g];
    }
    s.add(1.0 / (scale * w + mu));
  }
  return s.mean();
}

namespace {

// Contexts on which every candidate acts identically are interchangeable,
// as are candidates with identical action columns; the solver works on the
// compressed problem.
struct Compressed {
  std::vector<std::vector<Action>> rows;  // [candidate class][context class]
  std::vector<double> context_weight;     // multiplicity / n
  std::vector<std::size_t> row_of;        // candidate -> candidate class
  std::vector<std::size_t> representative;
};

Compressed compress(const ActionProfile& actions) {
  Compressed c;
  const std::size_t F = actions.size();
  const std::size_t n = F ? actions[0].size() : 0;
  std::map<std::vector<Action>, std::size_t> columns;
  std::vector<std::vector<Action>> cols;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Action> col(F);
    for (std::size_t f = 0; f < F; ++f) col[f] = actions[f][i];
    auto [it, inserted] = columns.emplace(col, cols.size());
    if (inserted) {
      cols.push_back(std::move(col));
      c.context_weight.push_back(0.0);
    }
    c.context_weight[it->second] += 1.0;
  }
  for (auto& w : c.context_weight) w /= static_cast<double>(n);
  std::map<std::vector<Action>, std::size_t> rows;
  c.row_of.resize(F);
  for (std::size_t f = 0; f < F; ++f) {
    std::vector<Action> row(cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) row[j] = cols[j][f];
    auto [it, inserted] = rows.emplace(row, c.rows.size());
    if (inserted) {
      c.rows.push_back(std::move(row));
      c.representative.push_back(f);
    }
    c.row_of[f] = it->second;
  }
  return c;
}

// Per candidate class: V = E[1/W'] and S = E[1/W'^2] under a (sub)distribution.
struct Moments {
  std::vector<double> v;
  std::vector<double> s;
};

Moments moments(const Compressed& c, const std::vector<double>& w, std::size_t A, double mu) {
  const double scale = 1.0 - static_cast<double>(A) * mu;
  const std::size_t J = c.context_weight.size();
  std::vector<double> cov(J * A, 0.0);
  for (std::size_t r = 0; r < c.rows.size(); ++r) {
    if (w[r] == 0.0) continue;
    for (std::size_t j = 0; j < J; ++j) cov[j * A + c.rows[r][j]] += w[r];
  }
  Moments m{std::vector<double>(c.rows.size(), 0.0), std::vector<double>(c.rows.size(), 0.0)};
  for (std::size_t r = 0; r < c.rows.size(); ++r) {
    for (std::size_t j = 0; j < J; ++j) {
      const double inv = 1.0 / (scale * cov[j * A + c.rows[r][j]] + mu);
      m.v[r] += c.context_weight[j] * inv;
      m.s[r] += c.context_weight[j] * inv * inv;
    }
  }
  return m;
}

}  // namespace

LowVarianceSolution solve_low_variance_distribution(const ActionProfile& actions,
                                                    std::size_t num_actions, double mu,
                                                    std::size_t start, double bound,
                                                    std::size_t iteration_cap) {
  if (actions.empty()) throw std::invalid_argument("no candidates");
  if (start >= actions.size()) throw std::invalid_argument("start candidate out of range");
  if (!(mu > 0.0) || mu * static_cast<double>(num_actions) > 1.0) {
    throw std::invalid_argument("mu must lie in (0, 1/A]");
  }
  LowVarianceSolution sol;
  sol.weights.assign(actions.size(), 0.0);
  if (actions[0].empty()) {
    sol.weights[start] = 1.0;
    return sol;
  }
  Compressed c = compress(actions);
  // Candidates that act identically share a row; the start speaks for its own.
  c.representative[c.row_of[start]] = start;
  const double scale = 1.0 - static_cast<double>(num_actions) * mu;
  std::vector<double> w(c.rows.size(), 0.0);
  w[c.row_of[start]] = 1.0;

  // Coordinate descent on a sub-distribution: rescale when the mass exceeds
  // one, otherwise add the closed-form step to the worst violator. Leftover
  // mass goes back to the start candidate, which can only raise coverage.
  while (true) {
    const double mass = std::accumulate(w.begin(), w.end(), 0.0);
    if (mass > 1.0) {
      for (auto& x : w) x /= mass;
    }
    const auto m = moments(c, w, num_actions, mu);
    const auto worst = static_cast<std::size_t>(std::max_element(m.v.begin(), m.v.end()) - m.v.begin());
    sol.max_value = m.v[worst];
    if (m.v[worst] <= bound) break;
    if (sol.iterations >= iteration_cap) {
      throw std::runtime_error("low-variance solver hit its iteration cap (" +
                               std::to_string(iteration_cap) + ") with max value " +
                               std::to_string(m.v[worst]) + " > " + std::to_string(bound));
    }
    ++sol.iterations;
    const double excess = m.v[worst] - bound;
    w[worst] += (m.v[worst] + excess) / (2.0 * scale * m.s[worst]);
  }
  const double mass = std::accumulate(w.begin(), w.end(), 0.0);
  w[c.row_of[start]] += std::max(0.0, 1.0 - mass);
  for (std::size_t r = 0; r < c.rows.size(); ++r) {
    if (w[r] > 0.0) sol.weights[c.representative[r]] = w[r];
  }
  const double total = std::accumulate(sol.weights.begin(), sol.weights.end(), 0.0);
  for (auto& x : sol.weights) x /= total;
  return sol;
}

}  // namespace ave
