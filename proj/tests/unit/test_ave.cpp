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

#include <algorithm>
#include <cmath>
#include <memory>

#include "doctest.h"
#include "fixtures.hpp"
#include "ave/ave.hpp"
#include "ave/calibration.hpp"
#include "ave/experiment.hpp"
#include "ave/generators.hpp"
#include "ave/oracles.hpp"

using namespace ave;

namespace {

constexpr int kSeeds = 40;
constexpr int kRequired = 38;  // 95% of 40

LayeredMdp bench_mdp() {
  const auto c = benchmark_config();
  return gen_low_rank_mdp(c.generator, c.instance_seed);
}

LayerTablePtr layer_of(const Hypothesis& f, int h, double delta = 0.0) {
  auto t = std::make_shared<LayerTable>(*f.layer(h));
  for (auto& v : t->values) v = std::clamp(v + delta, 0.0, 1.0);
  return t;
}

// Class whose layer h offers f*_h plus the given shifted copies; every other
// layer holds f* only. Member i differs from f* by shifts[i-1] on layer h.
HypothesisClass planted_class(const LayeredMdp& m, int h, const std::vector<double>& shifts) {
  const auto q = compute_qstar(m);
  std::vector<std::vector<LayerTablePtr>> layers(m.horizon());
  for (int l = 1; l <= m.horizon(); ++l) {
    layers[l - 1].push_back(q.layer(l));
    if (l == h) {
      for (double s : shifts) layers[l - 1].push_back(layer_of(q, l, s));
    }
  }
  return HypothesisClass(m.shared_space(), std::move(layers));
}

Schedule calibrated(const LayeredMdp& m, const HypothesisClass& cls) {
  ScheduleInputs in;
  in.epsilon = 0.1;
  in.delta = 0.1;
  in.num_actions = m.num_actions();
  in.rank = m.low_rank()->rank;
  in.horizon = m.horizon();
  in.class_size = cls.size();
  in.zeta = 1.0;
  in.scales = calibrated_scales(estimator_variances(m, cls), in);
  return make_schedule(in);
}

}  // namespace

TEST_CASE("a singleton class exploits from the start") {
  const auto m = bench_mdp();
  ClassConfig cc;
  cc.distractors_per_layer = 0;
  const auto gc = gen_hypothesis_class(m, cc, 1);
  const auto s = calibrated(m, gc.cls);
  const auto out = ave_main(m, gc.cls, s, 3000, 1);
  CHECK(out.report.termination == Termination::kConverged);
  CHECK(out.report.counters.eliminate_calls == 0);
  CHECK(out.report.episodes_used == 3000);
  CHECK(out.ledger.size() == 3000);
  CHECK(out.ledger.cumulative_regret() <= 1e-9);
  for (const auto& r : out.ledger.records()) {
    CHECK((r.phase == "main_eval" || r.phase == "exploit"));
  }
}

TEST_CASE("check with nonpositive precision is free") {
  const auto m = bench_mdp();
  const auto cls = planted_class(m, 2, {0.2});
  AveAgent agent(m, cls, calibrated(m, cls), 100, 1);
  const auto r0 = agent.check(Mixture::point_mass(cls.member(1)), 1, 0);
  const auto rm = agent.check(Mixture::point_mass(cls.member(1)), 1, -1);
  CHECK(r0.passed);
  CHECK(rm.passed);
  CHECK(agent.runner().budget().consumed() == 0);
}

TEST_CASE("check passes on the optimal hypothesis") {
  const auto m = bench_mdp();
  const auto cls = planted_class(m, 2, {0.2});
  for (int seed = 1; seed <= 5; ++seed) {
    AveAgent agent(m, cls, calibrated(m, cls), 1'000'000, seed);
    CHECK(agent.check(Mixture::point_mass(cls.member(0)), 1, 3).passed);
  }
}

TEST_CASE("optimistic choice breaks ties to the lowest index") {
  const auto m = bench_mdp();
  // Two copies of f* on layer 2: members 0 and 1 predict the same root value.
  const auto cls = planted_class(m, 2, {0.0});
  AveAgent agent(m, cls, calibrated(m, cls), 10, 1);
  CHECK(agent.optimistic_choice() == 0);
  agent.set_live({1});
  CHECK(agent.optimistic_choice() == 1);
}

TEST_CASE("pseudo-learn keeps a lone hypothesis") {
  const auto m = bench_mdp();
  const auto cls = planted_class(m, 2, {0.2});
  AveAgent agent(m, cls, calibrated(m, cls), 1'000'000, 3);
  agent.set_live({0});
  agent.eliminate(0, 2, 2);
  CHECK(agent.live() == std::vector<std::size_t>{0});
  CHECK(agent.counters().pseudo_learn_steps.at({2, 1}) == 1);
  CHECK(agent.counters().pseudo_learn_steps.at({2, 2}) == 1);
  CHECK(agent.counters().learn_steps.at({2, 2}) == 1);
}

TEST_CASE("an inflated first layer triggers elimination at layer 1") {
  const auto m = bench_mdp();
  const double gap = 0.15;
  const auto cls = planted_class(m, 1, {gap});
  const auto s = calibrated(m, cls);
  // Exact error of the planted member is `gap` at layer 1 and zero elsewhere.
  const auto planted = cls.member(1);
  CHECK(std::abs(exact_bellman_error(m, planted, planted.greedy_policy(), 1) - gap) <= 1e-12);
  // The first k with eps_k below half the error.
  int k_half = 1;
  while (s.eps(k_half) >= gap / 2) ++k_half;
  int ok = 0;
  for (int seed = 1; seed <= kSeeds; ++seed) {
    AveAgent agent(m, cls, s, 200'000, static_cast<std::uint64_t>(seed));
    const auto out = agent.run();
    const auto& c = out.report.counters;
    bool layer_one = false;
    for (const auto& [key, count] : c.learn_steps) layer_one |= key.first == 1 && key.second <= k_half;
    ok += out.report.termination == Termination::kConverged && layer_one &&
          out.report.live_set == std::vector<std::size_t>{0};
  }
  CHECK(ok >= kRequired);
}

TEST_CASE("learn removes a hypothesis with error four times the threshold") {
  const auto m = bench_mdp();
  const int j = 1;
  const auto probe = planted_class(m, 2, {0.0});
  const double phi = calibrated(m, probe).phi(j);
  const auto cls = planted_class(m, 2, {4 * phi});
  const auto s = calibrated(m, cls);
  const auto star = cls.member(0);
  CHECK(std::abs(exact_bellman_error(m, cls.member(1), star.greedy_policy(), 2) - 4 * phi) <= 1e-12);
  int ok = 0;
  for (int seed = 1; seed <= kSeeds; ++seed) {
    AveAgent agent(m, cls, s, 1'000'000, static_cast<std::uint64_t>(seed));
    agent.eliminate(0, 2, j);
    ok += agent.live() == std::vector<std::size_t>{0};
  }
  CHECK(ok >= kRequired);
}

TEST_CASE("check fails on a planted tail error and identify names the member") {
  const auto m = bench_mdp();
  const int H = m.horizon();
  const int h = 2;
  const int j = 3;
  const auto probe = make_schedule([&] {
    ScheduleInputs in;
    in.horizon = H;
    return in;
  }());
  const double planted_error = 4 * (H - h) * probe.eps(j);
  const auto cls = planted_class(m, 3, {planted_error});
  const auto s = calibrated(m, cls);
  double tail = 0.0;
  for (int hp = h + 1; hp <= H; ++hp) {
    tail += exact_mixture_bellman_error(m, Mixture::point_mass(cls.member(1)), hp);
  }
  CHECK(std::abs(tail - planted_error) <= 1e-12);
  int ok = 0;
  for (int seed = 1; seed <= kSeeds; ++seed) {
    AveAgent agent(m, cls, s, 1'000'000, static_cast<std::uint64_t>(seed));
    const auto r = agent.check(Mixture::point_mass(cls.member(1)), h, j);
    ok += !r.passed && r.k <= j && r.g == 1 && r.h == 3;
  }
  CHECK(ok >= kRequired);
}

TEST_CASE("identify isolates the planted member of a four-way mixture") {
  const auto m = bench_mdp();
  const int h = 2;
  const int k = 1;
  ScheduleInputs base;
  base.horizon = m.horizon();
  const double shift = 3 * make_schedule(base).eps(k + 2);
  const auto cls = planted_class(m, 3, {0.0, 0.0, shift});
  const auto s = calibrated(m, cls);
  // Weight 0.7 on the planted member keeps the mixture's tail error above
  // (H - h) eps_{k+1}, the precondition of the search.
  const Mixture g({{cls.member(0), 0.1}, {cls.member(1), 0.1}, {cls.member(2), 0.1},
                   {cls.member(3), 0.7}});
  CHECK(std::abs(exact_mixture_bellman_error(m, g, 3)) >= (m.horizon() - h) * s.eps(k + 1));
  int ok = 0;
  for (int seed = 1; seed <= kSeeds; ++seed) {
    AveAgent agent(m, cls, s, 1'000'000, static_cast<std::uint64_t>(seed));
    const auto r = agent.identify(g, h, k);
    ok += r.g == 3 && r.h == 3;
  }
  CHECK(ok >= kRequired);

  SUBCASE("a single member skips the search") {
    AveAgent agent(m, cls, s, 1'000'000, 1);
    const auto r = agent.identify(Mixture::point_mass(cls.member(3)), h, k);
    CHECK(r.g == 3);
    CHECK(r.h == 3);
    CHECK(agent.counters().identify_calls == 1);
    const auto& phases = agent.runner().phase_episodes();
    CHECK(phases.count("identify") == 0);
    CHECK(phases.at("identify_final") > 0);
  }
}

TEST_CASE("running out of budget stops the run cleanly") {
  const auto m = bench_mdp();
  const auto cls = planted_class(m, 1, {0.3});
  const auto s = calibrated(m, cls);
  const auto out = ave_main(m, cls, s, 250, 4);
  CHECK(out.report.termination == Termination::kBudgetExhausted);
  CHECK(out.report.episodes_used == 250);
  CHECK(out.ledger.size() == 250);
}

TEST_CASE("find-distribution reports every solve") {
  const auto m = bench_mdp();
  const auto cls = planted_class(m, 2, {0.1, 0.2, 0.3});
  const auto s = calibrated(m, cls);
  std::size_t seen = 0;
  AveOptions opt;
  opt.on_find_distribution = [&](const FindDistributionTrace& t) {
    ++seen;
    CHECK(t.contexts.size() == s.n_cb(t.k - 1));
    CHECK(t.live.size() == t.weights.size());
    CHECK(t.mu == s.mu(t.k));
  };
  AveAgent agent(m, cls, s, 1'000'000, 2, opt);
  const auto p = agent.find_distribution(0, 2, 2);
  CHECK(seen == 1);
  double total = 0.0;
  for (const auto& e : p.entries()) total += e.weight;
  CHECK(std::abs(total - 1.0) <= 1e-12);
  CHECK(agent.runner().phase_episodes().at("find_distribution") == s.n_cb(1));
}
