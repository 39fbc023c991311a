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

#include "ave/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ave/mdp.hpp"

namespace ave {
namespace {

std::size_t at_least_one(double raw) {
  return static_cast<std::size_t>(std::max(1.0, std::ceil(raw)));
}

}  // namespace

Schedule make_schedule(const ScheduleInputs& in) {
  if (!(in.epsilon > 0.0 && in.epsilon < 1.0)) throw ModelError("epsilon must lie in (0,1)");
  if (!(in.delta > 0.0 && in.delta < 1.0)) throw ModelError("delta must lie in (0,1)");
  if (in.num_actions == 0) throw ModelError("schedule needs A >= 1");
  if (in.rank == 0) throw ModelError("schedule needs M >= 1");
  if (in.horizon < 1) throw ModelError("schedule needs H >= 1");
  if (in.class_size == 0) throw ModelError("schedule needs a nonempty class");
  for (double s : {in.scales.eval, in.scales.cb, in.scales.learn, in.scales.identify}) {
    if (!(s > 0.0)) throw ModelError("scale multipliers must be positive");
  }

  Schedule s;
  s.in_ = in;
  s.L_ = static_cast<int>(std::ceil(std::log2(in.horizon / in.epsilon)));
  const double two_phi_L = 2.0 * s.phi(s.L_);
  if (!(in.zeta > two_phi_L)) {
    throw ModelError("zeta must exceed 2 phi_L = " + std::to_string(two_phi_L));
  }
  s.iota_ = std::log(in.zeta / two_phi_L) / std::log(5.0 / 3.0);
  const double L = s.L_;
  const double H = in.horizon;
  const double M = static_cast<double>(in.rank);
  const double F = static_cast<double>(in.class_size);
  s.C_ = L * H * M * s.iota_;
  s.P_ = M * H * in.zeta / in.epsilon;
  s.log_plain_ = std::log(14.0 * L * L * s.C_ / in.delta);
  s.log_class_ = std::log(14.0 * L * L * s.C_ * F / in.delta);
  const double log_f = in.log_base == PrecisionLogBase::kTwo ? std::log2(F) : std::log(F);
  s.prime_divisor_ = std::ceil(log_f + 1.0);
  const double steps = std::ceil(std::log2(F));
  s.id_factor_ = steps * steps;
  return s;
}

double Schedule::eps(int i) const { return std::ldexp(1.0, -i); }

double Schedule::eps_prime(int i) const { return eps(i) / prime_divisor_; }

double Schedule::phi(int i) const {
  return eps(i) / (12.0 * std::sqrt(static_cast<double>(in_.rank)));
}

double Schedule::mu(int k) const {
  const double A = static_cast<double>(in_.num_actions);
  return std::min(eps(k) / A, 1.0 / (2.0 * A));
}

double Schedule::raw_n_eval(int i) const {
  const double e = eps(i);
  return in_.scales.eval * log_plain_ / (e * e);
}

double Schedule::raw_n_cb(int i) const {
  const double e = eps(i);
  return in_.scales.cb * static_cast<double>(in_.num_actions) * log_class_ / (e * e);
}

double Schedule::raw_n_learn(int i) const {
  const double e = eps(i);
  return in_.scales.learn * static_cast<double>(in_.num_actions) *
         static_cast<double>(in_.rank) * log_class_ / (e * e);
}

double Schedule::raw_n_id(int i) const {
  const double e = eps(i);
  return in_.scales.identify * id_factor_ * log_plain_ / (e * e);
}

std::size_t Schedule::n_eval(int i) const { return at_least_one(raw_n_eval(i)); }
std::size_t Schedule::n_cb(int i) const { return at_least_one(raw_n_cb(i)); }
std::size_t Schedule::n_learn(int i) const { return at_least_one(raw_n_learn(i)); }
std::size_t Schedule::n_id(int i) const { return at_least_one(raw_n_id(i)); }

double Schedule::learn_step_bound(int j) const {
  return std::ceil(static_cast<double>(in_.rank) * std::log(in_.zeta / (2.0 * phi(j))) /
                   std::log(5.0 / 3.0));
}

}  // namespace ave
