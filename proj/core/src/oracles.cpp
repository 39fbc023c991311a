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

#include "ave/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ave/numeric.hpp"

namespace ave {
namespace {

// Expected greedy value of f over the next-layer distribution of (x, a).
double expected_next_greedy(const LayeredMdp& mdp, const Hypothesis& f, StateId x, Action a) {
  const int h = mdp.space().layer_of(x);
  if (h == mdp.horizon()) return 0.0;
  const StateId base = mdp.space().first_state(h + 1);
  const auto row = mdp.transition(x, a);
  CompensatedSum s;
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (row[i] != 0.0) s.add(row[i] * f.greedy_value(base + static_cast<StateId>(i)));
  }
  return s.sum();
}

double expected_next(const LayeredMdp& mdp, const std::vector<double>& v, StateId x, Action a) {
  const int h = mdp.space().layer_of(x);
  if (h == mdp.horizon()) return 0.0;
  const StateId base = mdp.space().first_state(h + 1);
  const auto row = mdp.transition(x, a);
  CompensatedSum s;
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (row[i] != 0.0) s.add(row[i] * v[base + i]);
  }
  return s.sum();
}

}  // namespace

std::vector<double> value_table(const LayeredMdp& mdp, const Policy& policy) {
  const auto& sp = mdp.space();
  const std::size_t A = mdp.num_actions();
  std::vector<double> v(sp.num_states(), std::numeric_limits<double>::quiet_NaN());
  for (int h = sp.horizon(); h >= 1; --h) {
    const StateId first = sp.first_state(h);
    for (StateId x = first; x < first + sp.layer_size(h); ++x) {
      if (!policy.defined(x)) continue;
      if (auto a = policy.action(x)) {
        v[x] = mdp.reward(x, *a) + expected_next(mdp, v, x, *a);
        continue;
      }
      CompensatedSum s;
      for (Action a = 0; a < A; ++a) {
        const double p = policy.prob(x, a);
        if (p != 0.0) s.add(p * (mdp.reward(x, a) + expected_next(mdp, v, x, a)));
      }
      v[x] = s.sum();
    }
  }
  return v;
}

double exact_value(const LayeredMdp& mdp, const Policy& policy) {
  return exact_value_at(mdp, policy, 1, mdp.initial_state());
}

double exact_value_at(const LayeredMdp& mdp, const Policy& policy, int h, StateId x) {
  if (!mdp.space().in_layer(x, h)) {
    throw ModelError("state " + std::to_string(x) + " is not in layer " + std::to_string(h));
  }
  const double v = value_table(mdp, policy)[x];
  if (std::isnan(v)) throw std::logic_error("policy undefined on a reachable state");
  return v;
}

std::vector<StateDist> exact_state_distributions(const LayeredMdp& mdp, const Policy& policy) {
  const auto& sp = mdp.space();
  const std::size_t A = mdp.num_actions();
  std::vector<StateDist> out;
  out.reserve(sp.horizon());
  StateDist d{1, std::vector<double>(sp.layer_size(1), 0.0)};
  d.probs[0] = 1.0;
  out.push_back(d);
  for (int h = 1; h < sp.horizon(); ++h) {
    const auto& cur = out.back();
    std::vector<CompensatedSum> next(sp.layer_size(h + 1));
    const StateId first = sp.first_state(h);
    for (std::size_t i = 0; i < cur.probs.size(); ++i) {
      const double px = cur.probs[i];
      if (px == 0.0) continue;
      const StateId x = first + static_cast<StateId>(i);
      for (Action a = 0; a < A; ++a) {
        const double pa = policy.prob(x, a);
        if (pa == 0.0) continue;
        const auto row = mdp.transition(x, a);
        for (std::size_t j = 0; j < row.size(); ++j) {
          if (row[j] != 0.0) next[j].add(px * pa * row[j]);
        }
      }
    }
    StateDist nd{h + 1, std::vector<double>(next.size())};
    for (std::size_t j = 0; j < next.size(); ++j) nd.probs[j] = next[j].sum();
    out.push_back(std::move(nd));
  }
  return out;
}

StateDist exact_state_distribution(const LayeredMdp& mdp, const Policy& policy, int h) {
  if (h < 1 || h > mdp.horizon()) throw ModelError("layer out of range");
  auto all = exact_state_distributions(mdp, policy);
  return std::move(all[h - 1]);
}

Hypothesis compute_qstar(const LayeredMdp& mdp) {
  const auto& sp = mdp.space();
  const std::size_t A = mdp.num_actions();
  std::vector<double> q(sp.num_states() * A, 0.0);
  std::vector<double> vstar(sp.num_states(), 0.0);
  for (int h = sp.horizon(); h >= 1; --h) {
    const StateId first = sp.first_state(h);
    for (StateId x = first; x < first + sp.layer_size(h); ++x) {
      double best = -1.0;
      for (Action a = 0; a < A; ++a) {
        const double v = std::clamp(mdp.reward(x, a) + expected_next(mdp, vstar, x, a), 0.0, 1.0);
        q[x * A + a] = v;
        best = std::max(best, v);
      }
      vstar[x] = best;
    }
  }
  return Hypothesis::from_dense(mdp.shared_space(), q);
}

double optimal_value(const LayeredMdp& mdp) { return predicted_root_value(compute_qstar(mdp)); }

double state_residual(const LayeredMdp& mdp, const Hypothesis& f, StateId x) {
  const Action a = f.greedy_action(x);
  return f.value(x, a) - mdp.reward(x, a) - expected_next_greedy(mdp, f, x, a);
}

double exact_bellman_error(const LayeredMdp& mdp, const Hypothesis& f, const Policy& roll_in,
                           int h) {
  const auto d = exact_state_distribution(mdp, roll_in, h);
  const StateId first = mdp.space().first_state(h);
  CompensatedSum s;
  for (std::size_t i = 0; i < d.probs.size(); ++i) {
    if (d.probs[i] != 0.0) s.add(d.probs[i] * state_residual(mdp, f, first + static_cast<StateId>(i)));
  }
  return s.sum();
}

double exact_eta(const LayeredMdp& mdp, const Hypothesis& f, const Hypothesis& g, int h) {
  const auto d = exact_state_distribution(mdp, g.greedy_policy(), h);
  const StateId first = mdp.space().first_state(h);
  CompensatedSum s;
  for (std::size_t i = 0; i < d.probs.size(); ++i) {
    if (d.probs[i] == 0.0) continue;
    const StateId x = first + static_cast<StateId>(i);
    const Action a = f.greedy_action(x);
    s.add(d.probs[i] * (mdp.reward(x, a) + expected_next_greedy(mdp, f, x, a)));
  }
  return s.sum();
}

double exact_mixture_bellman_error(const LayeredMdp& mdp, const Mixture& g, int h) {
  CompensatedSum s;
  for (const auto& e : g.entries()) {
    s.add(e.weight * exact_bellman_error(mdp, e.hypothesis, e.hypothesis.greedy_policy(), h));
  }
  return s.sum();
}

Eigen::MatrixXd bellman_error_matrix(const LayeredMdp& mdp, const HypothesisClass& cls, int h) {
  const std::size_t n = cls.size();
  const StateId first = mdp.space().first_state(h);
  const std::size_t width = mdp.space().layer_size(h);
  // Residuals depend only on f, distributions only on g.
  Eigen::MatrixXd dist(n, width);
  Eigen::MatrixXd res(n, width);
  for (std::size_t i = 0; i < n; ++i) {
    const auto f = cls.member(i);
    const auto d = exact_state_distribution(mdp, f.greedy_policy(), h);
    for (std::size_t s = 0; s < width; ++s) {
      dist(i, s) = d.probs[s];
      res(i, s) = state_residual(mdp, f, first + static_cast<StateId>(s));
    }
  }
  return dist * res.transpose();
}

int numerical_rank(const Eigen::MatrixXd& m, double rel_tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > rel_tol * sv(0)) ++rank;
  }
  return rank;
}

FactorizationCertificate compute_factorization(const LayeredMdp& mdp, const HypothesisClass& cls,
                                               int h) {
  const auto& spec = mdp.low_rank();
  if (!spec) throw ModelError("instance carries no low-rank specification; supply zeta directly");
  const auto& sp = mdp.space();
  if (h < 1 || h > sp.horizon()) throw ModelError("layer out of range");
  const std::size_t M = spec->rank;
  const std::size_t n = cls.size();
  const std::size_t A = sp.num_actions();
  FactorizationCertificate cert;
  cert.layer = h;
  cert.left = Eigen::MatrixXd::Zero(n, M);
  cert.right = Eigen::MatrixXd::Zero(n, M);
  const StateId first = sp.first_state(h);
  for (std::size_t i = 0; i < n; ++i) {
    const auto f = cls.member(i);
    if (h == 1) {
      cert.left(i, 0) = 1.0;
      cert.right(i, 0) = state_residual(mdp, f, mdp.initial_state());
      continue;
    }
    const auto d = exact_state_distribution(mdp, f.greedy_policy(), h - 1);
    const StateId prev = sp.first_state(h - 1);
    for (std::size_t s = 0; s < d.probs.size(); ++s) {
      if (d.probs[s] == 0.0) continue;
      const StateId x = prev + static_cast<StateId>(s);
      const auto& w = spec->weights[x * A + f.greedy_action(x)];
      for (std::size_t m = 0; m < M; ++m) cert.left(i, m) += d.probs[s] * w[m];
    }
    const auto& basis = spec->basis[h - 2];
    for (std::size_t s = 0; s < sp.layer_size(h); ++s) {
      const double r = state_residual(mdp, f, first + static_cast<StateId>(s));
      for (std::size_t m = 0; m < M; ++m) cert.right(i, m) += basis[m][s] * r;
    }
  }
  const double max_left = n ? cert.left.rowwise().norm().maxCoeff() : 0.0;
  const double max_right = n ? cert.right.rowwise().norm().maxCoeff() : 0.0;
  cert.zeta = max_left * max_right;
  return cert;
}

double certified_zeta(const LayeredMdp& mdp, const HypothesisClass& cls) {
  double zeta = 0.0;
  for (int h = 1; h <= mdp.horizon(); ++h) {
    zeta = std::max(zeta, compute_factorization(mdp, cls, h).zeta);
  }
  return zeta;
}

}  // namespace ave
