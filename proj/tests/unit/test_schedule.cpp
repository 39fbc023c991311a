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

#include "doctest.h"
#include "ave/mdp.hpp"
#include "ave/schedule.hpp"

using namespace ave;

namespace {

ScheduleInputs inputs() {
  ScheduleInputs in;
  in.epsilon = 0.1;
  in.delta = 0.1;
  in.num_actions = 3;
  in.rank = 2;
  in.horizon = 3;
  in.class_size = 27;
  in.zeta = 0.9;
  in.scales = {0.2, 6.0, 1.1, 0.12};
  return in;
}

}  // namespace

TEST_CASE("derived constants follow their definitions") {
  const auto in = inputs();
  const auto s = make_schedule(in);
  const int L = static_cast<int>(std::ceil(std::log2(3 / 0.1)));
  CHECK(s.levels() == L);
  CHECK(L == 5);
  const double phi_L = std::pow(2.0, -L) / (12 * std::sqrt(2.0));
  const double iota = std::log(0.9 / (2 * phi_L)) / std::log(5.0 / 3.0);
  CHECK(std::abs(s.iota() - iota) <= 1e-12 * iota);
  const double C = L * 3 * 2 * iota;
  CHECK(std::abs(s.invocation_bound() - C) <= 1e-12 * C);
  CHECK(std::abs(s.problem_scale() - 2 * 3 * 0.9 / 0.1) <= 1e-12);
  CHECK(std::abs(s.log_factor() - std::log(14 * L * L * C / 0.1)) <= 1e-12);
  CHECK(std::abs(s.log_factor_class() - std::log(14 * L * L * C * 27 / 0.1)) <= 1e-12);

  for (int i = 0; i <= 8; ++i) {
    const double e = std::ldexp(1.0, -i);
    CHECK(s.eps(i) == e);
    CHECK(std::abs(s.eps_prime(i) - e / std::ceil(std::log2(27.0) + 1)) <= 1e-15);
    CHECK(std::abs(s.phi(i) - e / (12 * std::sqrt(2.0))) <= 1e-15);
    CHECK(s.mu(i) == std::min(e / 3, 1.0 / 6));
    const double lp = s.log_factor(), lc = s.log_factor_class();
    const double id = std::pow(std::ceil(std::log2(27.0)), 2);
    CHECK(std::abs(s.raw_n_eval(i) - 0.2 * lp / (e * e)) <= 1e-9 * s.raw_n_eval(i));
    CHECK(std::abs(s.raw_n_cb(i) - 6.0 * 3 * lc / (e * e)) <= 1e-9 * s.raw_n_cb(i));
    CHECK(std::abs(s.raw_n_learn(i) - 1.1 * 3 * 2 * lc / (e * e)) <= 1e-9 * s.raw_n_learn(i));
    CHECK(std::abs(s.raw_n_id(i) - 0.12 * id * lp / (e * e)) <= 1e-9 * s.raw_n_id(i));
    CHECK(s.n_eval(i) == std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(s.raw_n_eval(i)))));
    CHECK(s.n_cb(i) == std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(s.raw_n_cb(i)))));
    CHECK(s.n_learn(i) == std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(s.raw_n_learn(i)))));
    CHECK(s.n_id(i) == std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(s.raw_n_id(i)))));
  }
  for (int j = 1; j <= 6; ++j) {
    CHECK(s.learn_step_bound(j) ==
          std::ceil(2 * std::log(0.9 / (2 * s.phi(j))) / std::log(5.0 / 3.0)));
  }
}

TEST_CASE("worked values") {
  auto in = inputs();
  in.rank = 4;
  in.num_actions = 4;
  const auto s = make_schedule(in);
  CHECK(s.eps(3) == 0.125);
  CHECK(std::abs(s.phi(3) - 1.0 / 192) <= 1e-15);
  CHECK(s.mu(2) == 1.0 / 16);
  CHECK(s.mu(0) == 1.0 / 8);  // capped at 1/(2A)
  CHECK(s.raw_n_eval(4) / s.raw_n_eval(3) == 4.0);

  // Identify's split threshold with k = 1, STEP = 1, H - h = 2, |F| = 8.
  auto in8 = inputs();
  in8.class_size = 8;
  const auto s8 = make_schedule(in8);
  const double bound = 2 * (s8.eps(2) - 0.5 * s8.eps_prime(3));
  CHECK(std::abs(bound - 15.0 / 32) <= 1e-15);
}

TEST_CASE("sequences halve and sample sizes grow") {
  const auto s = make_schedule(inputs());
  for (int i = 0; i < 12; ++i) {
    CHECK(s.eps(i + 1) == s.eps(i) / 2);
    CHECK(s.eps_prime(i + 1) == s.eps_prime(i) / 2);
    CHECK(std::abs(s.phi(i + 1) - s.phi(i) / 2) <= 1e-15);
    CHECK(s.raw_n_eval(i + 1) == 4 * s.raw_n_eval(i));
    CHECK(s.raw_n_cb(i + 1) == 4 * s.raw_n_cb(i));
    CHECK(s.raw_n_learn(i + 1) == 4 * s.raw_n_learn(i));
    CHECK(s.raw_n_id(i + 1) == 4 * s.raw_n_id(i));
    CHECK(s.n_eval(i + 1) >= s.n_eval(i));
    CHECK(s.n_cb(i + 1) >= s.n_cb(i));
    CHECK(s.n_learn(i + 1) >= s.n_learn(i));
    CHECK(s.n_id(i + 1) >= s.n_id(i));
  }
  auto tiny = inputs();
  tiny.scales = ScaleMultipliers::uniform(1e-9);
  const auto t = make_schedule(tiny);
  CHECK(t.n_eval(0) == 1);
  CHECK(t.n_cb(0) == 1);
  CHECK(t.n_learn(0) == 1);
  CHECK(t.n_id(0) == 1);
}

TEST_CASE("natural log base for the identification precision") {
  auto in = inputs();
  in.log_base = PrecisionLogBase::kNatural;
  const auto s = make_schedule(in);
  CHECK(std::abs(s.eps_prime(2) - 0.25 / std::ceil(std::log(27.0) + 1)) <= 1e-15);
}

TEST_CASE("presets") {
  const auto d = ScaleMultipliers::desk();
  CHECK(d.eval == 0.05);
  CHECK(d.identify == 0.05);
  const ScaleMultipliers def;
  CHECK(def.cb == 1.0);
}

TEST_CASE("invalid inputs are rejected") {
  auto bad = [](auto mutate) {
    auto in = inputs();
    mutate(in);
    CHECK_THROWS_AS(make_schedule(in), ModelError);
  };
  bad([](ScheduleInputs& in) { in.epsilon = 0.0; });
  bad([](ScheduleInputs& in) { in.epsilon = 1.0; });
  bad([](ScheduleInputs& in) { in.delta = 1.5; });
  bad([](ScheduleInputs& in) { in.rank = 0; });
  bad([](ScheduleInputs& in) { in.num_actions = 0; });
  bad([](ScheduleInputs& in) { in.scales.cb = 0.0; });
  // 2 phi_L = 2^-5 / (6 sqrt 2), about 0.00368.
  bad([](ScheduleInputs& in) { in.zeta = 0.003; });
}
