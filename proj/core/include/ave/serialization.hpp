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

// Line-oriented text formats for instances and hypothesis classes. Reals
// are written with 17 significant digits so a write/read cycle is exact.
//
// Instance:
//   H A seed
//   |X_1| ... |X_H|
//   reward p_1 ... p_K        one line per (x, a), K = |X_{h+1}| (0 on layer H)
//   M                         optional low-rank section
//   w_1 ... w_M               one line per (x, a) on layers 1..H-1
//   q_1 ... q_{|X_h|}         M lines per layer h = 2..H
//
// Class:
//   H A
//   |F_1| ... |F_H|
//   v_1 ... v_A               one line per (member, local state), layer by layer

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "ave/hypothesis.hpp"
#include "ave/mdp.hpp"

namespace ave {

void write_instance(std::ostream& out, const LayeredMdp& mdp, std::uint64_t seed);

struct LoadedInstance {
  LayeredMdp mdp;
  std::uint64_t seed;
};

/// Throws ModelError on malformed input.
LoadedInstance read_instance(std::istream& in, RewardNoise noise = RewardNoise::kDeterministic);

void write_class(std::ostream& out, const HypothesisClass& cls);
HypothesisClass read_class(std::istream& in, std::shared_ptr<const StateSpace> space);

/// A double printed with 17 significant digits.
std::string format_real(double v);

}  // namespace ave
