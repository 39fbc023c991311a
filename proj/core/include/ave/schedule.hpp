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

#pragma once

#include <cstddef>

namespace ave {

/// Multipliers that stand in for the "large enough" constants of the four
/// sample-size families.
struct ScaleMultipliers {
  double eval = 1.0;      // n^eval: on-policy and mixture Bellman checks
  double cb = 1.0;        // n^cb: contexts and predicted-performance batches
  double learn = 1.0;     // n: importance-weighted Bellman batch of the learn step
  double identify = 1.0;  // n^id: binary search and final identification

  static ScaleMultipliers uniform(double s) { return {s, s, s, s}; }
  /// Documented desk-scale preset.
  static ScaleMultipliers desk() { return uniform(0.05); }
};

/// Base of the logarithm in eps'_i = eps_i / ceil(log|F| + 1).
enum class PrecisionLogBase { kTwo, kNatural };

struct ScheduleInputs {
  double epsilon = 0.1;
  double delta = 0.1;
  std::size_t num_actions = 2;
  std::size_t rank = 1;
  int horizon = 1;
  std::size_t class_size = 1;
  double zeta = 1.0;
  ScaleMultipliers scales{};
  PrecisionLogBase log_base = PrecisionLogBase::kTwo;
};

/// Every derived parameter and sample size used by the learner. Indices are
/// the precision levels i = 0, 1, 2, ... with eps_i = 2^-i.
class Schedule {
 public:
  const ScheduleInputs& inputs() const { return in_; }

  int levels() const { return L_; }  // L = ceil(log2(H/eps))
  double iota() const { return iota_; }
  double invocation_bound() const { return C_; }  // C = L H M iota
  double problem_scale() const { return P_; }     // P = M H zeta / eps

  double eps(int i) const;
  double eps_prime(int i) const;
  double phi(int i) const;
  /// min(eps_k / A, 1/(2A)).
  double mu(int k) const;

  /// Sample sizes before the ceiling.
  double raw_n_eval(int i) const;
  double raw_n_cb(int i) const;
  double raw_n_learn(int i) const;
  double raw_n_id(int i) const;

  std::size_t n_eval(int i) const;
  std::size_t n_cb(int i) const;
  std::size_t n_learn(int i) const;
  std::size_t n_id(int i) const;

  /// ceil(M log(zeta / (2 phi_j)) / log(5/3)): learn steps allowed per (h, j).
  double learn_step_bound(int j) const;

  double log_factor() const { return log_plain_; }        // ln(14 L^2 C / delta)
  double log_factor_class() const { return log_class_; }  // ln(14 L^2 C |F| / delta)

 private:
  friend Schedule make_schedule(const ScheduleInputs& in);
  Schedule() = default;

  ScheduleInputs in_{};
  int L_ = 0;
  double iota_ = 0.0;
  double C_ = 0.0;
  double P_ = 0.0;
  double log_plain_ = 0.0;
  double log_class_ = 0.0;
  double prime_divisor_ = 1.0;
  double id_factor_ = 0.0;
};

/// Throws ModelError when eps or delta is outside (0,1), M or A is zero, or
/// zeta <= 2 phi_L (iota undefined).
Schedule make_schedule(const ScheduleInputs& in);

}  // namespace ave
