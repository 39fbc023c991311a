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

#include <benchmark/benchmark.h>

#include <random>

#include "ave/ave.hpp"
#include "ave/experiment.hpp"
#include "ave/find_distribution.hpp"
#include "ave/generators.hpp"
#include "ave/oracles.hpp"

namespace {

const ave::PreparedExperiment& bench() {
  static const auto p = ave::prepare(ave::benchmark_config());
  return p;
}

ave::LayeredMdp wide_instance(std::size_t states) {
  ave::LowRankConfig c;
  c.layer_sizes = {1, states, states, states, states};
  c.num_actions = 4;
  c.rank = 3;
  return ave::gen_low_rank_mdp(c, 1);
}

void BM_ExactValue(benchmark::State& state) {
  const auto m = wide_instance(static_cast<std::size_t>(state.range(0)));
  const auto p = ave::Policy::uniform(m.shared_space());
  for (auto _ : state) benchmark::DoNotOptimize(ave::exact_value(m, p));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ExactValue)->RangeMultiplier(4)->Range(4, 256)->Complexity();

void BM_QStar(benchmark::State& state) {
  const auto m = wide_instance(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(ave::compute_qstar(m));
}
BENCHMARK(BM_QStar)->RangeMultiplier(4)->Range(4, 256);

void BM_BellmanErrorMatrix(benchmark::State& state) {
  const auto& p = bench();
  for (auto _ : state) benchmark::DoNotOptimize(ave::bellman_error_matrix(p.mdp, p.cls, 2));
}
BENCHMARK(BM_BellmanErrorMatrix);

void BM_Rollout(benchmark::State& state) {
  const auto& p = bench();
  const auto pol = ave::Policy::uniform(p.mdp.shared_space());
  ave::Rng rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(ave::rollout(p.mdp, pol, rng));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Rollout);

void BM_FindDistribution(benchmark::State& state) {
  const std::size_t F = static_cast<std::size_t>(state.range(0));
  const std::size_t n = 2000;
  const std::size_t A = 4;
  std::mt19937_64 gen(3);
  std::uniform_int_distribution<ave::Action> pick(0, A - 1);
  ave::ActionProfile act(F, std::vector<ave::Action>(n));
  for (auto& row : act) {
    for (auto& a : row) a = pick(gen);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        ave::solve_low_variance_distribution(act, A, 1.0 / 64, 0, 2.0 * A, 100'000));
  }
}
BENCHMARK(BM_FindDistribution)->RangeMultiplier(4)->Range(4, 256);

void BM_AveBenchmarkRun(benchmark::State& state) {
  const auto& p = bench();
  const auto c = ave::benchmark_config();
  std::uint64_t seed = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ave::run_algorithm(p, c, ave::Algorithm::kAve, seed++));
  }
}
BENCHMARK(BM_AveBenchmarkRun)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
