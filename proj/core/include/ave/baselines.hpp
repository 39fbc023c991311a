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
#include <cstdint>

#include "ave/hypothesis.hpp"
#include "ave/mdp.hpp"
#include "ave/report.hpp"

namespace ave {

struct OliveOptions {
  double epsilon = 0.1;
  /// On-policy episodes per verification; 0 selects ceil(8 H^2 / eps^2).
  std::size_t n_check = 0;
  /// Uniform-exploration episodes per elimination; 0 selects
  /// ceil(32 A H^2 / eps^2).
  std::size_t n_explore = 0;
};

/// Optimistic elimination with uniform exploration at the offending layer:
/// pick the optimistic f, verify its total Bellman error on-policy, and if
/// it is large, take a uniformly random action at the worst layer h, score
/// every live g by importance sampling (propensity 1/A), drop those with
/// |E(g, pi_f, h)| > eps / (2H), and repeat. Exploits once verified.
RunOutcome olive_baseline(const LayeredMdp& mdp, const HypothesisClass& cls, std::size_t budget,
                          const OliveOptions& options, std::uint64_t seed);

/// pi_U for every episode.
RunOutcome uniform_baseline(const LayeredMdp& mdp, std::size_t budget, std::uint64_t seed);

}  // namespace ave
