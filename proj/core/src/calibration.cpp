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

#include "ave/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ave/oracles.hpp"

namespace ave {
namespace {

// Mean and second moment of a reward draw under the instance's noise mode.
struct RewardMoments {
  double mean;
  double second;
};

RewardMoments reward_moments(const LayeredMdp& mdp, StateId x, Action a) {
  const double r = mdp.reward(x, a);
  if (mdp.noise() == RewardNoise::kDeterministic) return {r, r * r};
  // r_hat = 1/H with probability H r, else 0.
  return {r, r / mdp.horizon()};
}

// Walks every trajectory of pi_f, accumulating per-episode residual sums.
class PathWalker {
 public:
  PathWalker(const LayeredMdp& mdp, const Hypothesis& f, std::size_t max_paths)
      : mdp_(mdp), f_(f), H_(mdp.horizon()), max_paths_(max_paths) {
    tail_first_.assign(H_ + 1, 0.0);
    tail_second_.assign(H_ + 1, 0.0);
    layer_first_.assign(H_ + 1, 0.0);
    layer_second_.assign(H_ + 1, 0.0);
  }

  void walk() {
    residuals_.assign(H_ + 1, 0.0);
    reward_var_.assign(H_ + 1, 0.0);
    visit(mdp_.initial_state(), 1, 1.0);
  }

  // Variance of sum_{h' > h} residual_{h'}, h = 0..H-1.
  double tail_variance(int h) const { return tail_second_[h] - tail_first_[h] * tail_first_[h]; }
  double layer_variance(int h) const {
    return layer_second_[h] - layer_first_[h] * layer_first_[h];
  }

 private:
  void visit(StateId x, int h, double prob) {
    const Action a = f_.greedy_action(x);
    const auto rm = reward_moments(mdp_, x, a);
    const double here = f_.value(x, a) - rm.mean;
    reward_var_[h] = rm.second - rm.mean * rm.mean;
    if (h == H_) {
      residuals_[h] = here;
      finish(prob);
      return;
    }
    const auto row = mdp_.transition(x, a);
    const StateId base = mdp_.space().first_state(h + 1);
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (row[i] == 0.0) continue;
      const StateId next = base + static_cast<StateId>(i);
      residuals_[h] = here - f_.greedy_value(next);
      visit(next, h + 1, prob * row[i]);
    }
  }

  void finish(double prob) {
    if (++paths_ > max_paths_) {
      throw ModelError("trajectory enumeration exceeds " + std::to_string(max_paths_) + " paths");
    }
    // Reward noise is independent across layers and mean-zero around the
    // residuals used here, so it adds its variance to each second moment.
    for (int h = 1; h <= H_; ++h) {
      layer_first_[h] += prob * residuals_[h];
      layer_second_[h] += prob * (residuals_[h] * residuals_[h] + reward_var_[h]);
    }
    double sum = 0.0;
    double noise = 0.0;
    for (int h = H_; h >= 1; --h) {
      sum += residuals_[h];
      noise += reward_var_[h];
      tail_first_[h - 1] += prob * sum;
      tail_second_[h - 1] += prob * (sum * sum + noise);
    }
  }

  const LayeredMdp& mdp_;
  const Hypothesis& f_;
  int H_;
  std::size_t max_paths_;
  std::size_t paths_ = 0;
  std::vector<double> residuals_;
  std::vector<double> reward_var_;
  std::vector<double> tail_first_;
  std::vector<double> tail_second_;
  std::vector<double> layer_first_;
  std::vector<double> layer_second_;
};

}  // namespace

EstimatorVariances estimator_variances(const LayeredMdp& mdp, const HypothesisClass& cls,
                                       std::size_t max_paths) {
  const auto& sp = mdp.space();
  const int H = sp.horizon();
  const double A = static_cast<double>(sp.num_actions());
  EstimatorVariances v;
  for (std::size_t i = 0; i < cls.size(); ++i) {
    const auto f = cls.member(i);
    PathWalker w(mdp, f, max_paths);
    w.walk();
    for (int h = 1; h <= H; ++h) v.onpolicy = std::max(v.onpolicy, w.layer_variance(h));
    for (int h = 0; h < H; ++h) {
      const double span = H - h;
      v.tail_sum = std::max(v.tail_sum, w.tail_variance(h) / (span * span));
    }
    for (StateId x = 0; x < sp.num_states(); ++x) {
      const int h = sp.layer_of(x);
      const Action a = f.greedy_action(x);
      const auto rm = reward_moments(mdp, x, a);
      double second = rm.second;
      if (h < H) {
        const auto row = mdp.transition(x, a);
        const StateId base = sp.first_state(h + 1);
        for (std::size_t s = 0; s < row.size(); ++s) {
          const double nv = f.greedy_value(base + static_cast<StateId>(s));
          second += row[s] * (2.0 * rm.mean * nv + nv * nv);
        }
      }
      v.predicted_performance = std::max(v.predicted_performance, 2.0 * A * second);
    }
  }
  const auto qstar = compute_qstar(mdp);
  for (StateId x = 0; x < sp.num_states(); ++x) {
    const int h = sp.layer_of(x);
    const Action a = qstar.greedy_action(x);
    const auto rm = reward_moments(mdp, x, a);
    const double base_value = qstar.value(x, a) - rm.mean;
    double second = rm.second - rm.mean * rm.mean;
    if (h < H) {
      const auto row = mdp.transition(x, a);
      const StateId first = sp.first_state(h + 1);
      for (std::size_t s = 0; s < row.size(); ++s) {
        const double d = base_value - qstar.greedy_value(first + static_cast<StateId>(s));
        second += row[s] * d * d;
      }
    } else {
      second += base_value * base_value;
    }
    v.optimal_residual = std::max(v.optimal_residual, 2.0 * A * second);
  }
  return v;
}

ScaleMultipliers calibrated_scales(const EstimatorVariances& v, const ScheduleInputs& inputs,
                                   const ErrorTargets& t) {
  ScheduleInputs unit = inputs;
  unit.scales = ScaleMultipliers::uniform(1.0);
  const Schedule s = make_schedule(unit);
  const double A = static_cast<double>(inputs.num_actions);
  const double M = static_cast<double>(inputs.rank);
  const double eval_var = std::max(v.onpolicy, v.tail_sum);
  // Every family scales as 1/eps_i^2, so matching one level matches all:
  // n_i = s * base / eps_i^2 >= var / (target * threshold_i)^2.
  const double id_factor = s.raw_n_id(0) / s.log_factor();
  ScaleMultipliers out;
  out.eval = eval_var / (t.eval * t.eval * s.log_factor());
  out.cb = v.predicted_performance / (t.cb * t.cb * A * s.log_factor_class());
  // phi_j = eps_j / (12 sqrt(M)).
  out.learn = v.optimal_residual * 144.0 * M / (t.learn * t.learn * A * M * s.log_factor_class());
  // eps_{l+2} = eps_l / 4.
  out.identify = id_factor > 0.0 ? eval_var * 16.0 / (t.identify * t.identify * id_factor * s.log_factor())
                                 : 1.0;
  const double tiny = 1e-6;
  out.eval = std::max(out.eval, tiny);
  out.cb = std::max(out.cb, tiny);
  out.learn = std::max(out.learn, tiny);
  out.identify = std::max(out.identify, tiny);
  return out;
}

StandardErrors implied_standard_errors(const EstimatorVariances& v, const Schedule& s, int i) {
  const double eval_var = std::max(v.onpolicy, v.tail_sum);
  return {std::sqrt(eval_var / static_cast<double>(s.n_eval(i))) / s.eps(i),
          std::sqrt(v.predicted_performance / static_cast<double>(s.n_cb(i))) / s.eps(i),
          std::sqrt(v.optimal_residual / static_cast<double>(s.n_learn(i))) / s.phi(i),
          std::sqrt(eval_var / static_cast<double>(s.n_id(i))) / s.eps(i + 2)};
}

}  // namespace ave
