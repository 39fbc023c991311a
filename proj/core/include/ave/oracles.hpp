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

// Exact dynamic-programming oracles. Everything here is deterministic and
// computed from the MDP tables; nothing samples.

#pragma once

#include <vector>

#include <Eigen/Dense>

#include "ave/hypothesis.hpp"
#include "ave/mdp.hpp"

namespace ave {

/// V^pi_h(x) for every state, by backward induction.
std::vector<double> value_table(const LayeredMdp& mdp, const Policy& policy);

/// R(pi) = V^pi_1(x1).
double exact_value(const LayeredMdp& mdp, const Policy& policy);

/// V^pi_h(x). Throws ModelError when x is not in layer h.
double exact_value_at(const LayeredMdp& mdp, const Policy& policy, int h, StateId x);

/// D_{pi,h} by forward propagation from x1.
StateDist exact_state_distribution(const LayeredMdp& mdp, const Policy& policy, int h);

/// Every layer's state distribution at once; element h-1 is D_{pi,h}.
std::vector<StateDist> exact_state_distributions(const LayeredMdp& mdp, const Policy& policy);

/// f* = Q* by backward induction with Q_{H+1} = 0.
Hypothesis compute_qstar(const LayeredMdp& mdp);

/// V* = max over policies of R(pi).
double optimal_value(const LayeredMdp& mdp);

/// Expected one-step residual of f at state x under its own greedy action:
/// f(x,pi_f(x)) - r(x,pi_f(x)) - E_{x'} f(x', pi_f(x')).
double state_residual(const LayeredMdp& mdp, const Hypothesis& f, StateId x);

/// E(f, roll_in, h): the average Bellman error of f at layer h under the
/// layer-h state distribution of the roll-in policy.
double exact_bellman_error(const LayeredMdp& mdp, const Hypothesis& f, const Policy& roll_in,
                           int h);

/// eta(f, g, h): E_{x ~ D_{g,h}, x' ~ p(.|x,pi_f(x))}[r(x,pi_f(x)) + f(x',pi_f(x'))].
double exact_eta(const LayeredMdp& mdp, const Hypothesis& f, const Hypothesis& g, int h);

/// E(G, h) = E_{f~G} E(f, pi_f, h).
double exact_mixture_bellman_error(const LayeredMdp& mdp, const Mixture& g, int h);

/// Entry (g, f) = E(f, pi_g, h) over all members of the class.
Eigen::MatrixXd bellman_error_matrix(const LayeredMdp& mdp, const HypothesisClass& cls, int h);

/// Number of singular values above rel_tol * sigma_max.
int numerical_rank(const Eigen::MatrixXd& m, double rel_tol = 1e-8);

/// Exact bilinear certificate E(f, pi_g, h) = <nu_h(g), xi_h(f)>.
struct FactorizationCertificate {
  int layer = 0;
  Eigen::MatrixXd left;   // row g = nu_h(g)
  Eigen::MatrixXd right;  // row f = xi_h(f)
  double zeta = 0.0;      // max_{g,f} |nu_h(g)| |xi_h(f)| on this layer

  Eigen::MatrixXd product() const { return left * right.transpose(); }
};

/// Builds the certificate from the MDP's LowRankSpec. For h = 1 the left
/// vectors are the first unit vector and xi carries the point-mass residual.
/// Throws ModelError when the MDP carries no LowRankSpec.
FactorizationCertificate compute_factorization(const LayeredMdp& mdp, const HypothesisClass& cls,
                                               int h);

/// max over layers of the certificate zeta.
double certified_zeta(const LayeredMdp& mdp, const HypothesisClass& cls);

}  // namespace ave
