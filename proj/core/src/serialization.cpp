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

#include "ave/serialization.hpp"

#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace ave {
namespace {

// Reads whitespace-separated tokens and reports where parsing failed.
class TokenReader {
 public:
  explicit TokenReader(std::istream& in) : in_(in) {}

  std::string word(const char* what) {
    std::string s;
    if (!(in_ >> s)) throw ModelError(std::string("unexpected end of input reading ") + what);
    return s;
  }

  double real(const char* what) {
    const auto s = word(what);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      throw ModelError(std::string("malformed ") + what + ": '" + s + "'");
    }
    return v;
  }

  std::uint64_t count(const char* what) {
    const auto s = word(what);
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      throw ModelError(std::string("malformed ") + what + ": '" + s + "'");
    }
    return v;
  }

  bool at_end() {
    in_ >> std::ws;
    return in_.eof();
  }

 private:
  std::istream& in_;
};

void write_row(std::ostream& out, const std::vector<double>& row) {
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) out << ' ';
    out << format_real(row[i]);
  }
  out << '\n';
}

}  // namespace

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_instance(std::ostream& out, const LayeredMdp& mdp, std::uint64_t seed) {
  const auto& sp = mdp.space();
  const std::size_t A = sp.num_actions();
  out << sp.horizon() << ' ' << A << ' ' << seed << '\n';
  for (int h = 1; h <= sp.horizon(); ++h) out << (h > 1 ? " " : "") << sp.layer_size(h);
  out << '\n';
  for (StateId x = 0; x < sp.num_states(); ++x) {
    for (Action a = 0; a < A; ++a) {
      out << format_real(mdp.reward(x, a));
      for (double p : mdp.transition(x, a)) out << ' ' << format_real(p);
      out << '\n';
    }
  }
  if (const auto& spec = mdp.low_rank()) {
    out << spec->rank << '\n';
    for (const auto& w : spec->weights) write_row(out, w);
    for (const auto& layer : spec->basis) {
      for (const auto& q : layer) write_row(out, q);
    }
  }
}

LoadedInstance read_instance(std::istream& in, RewardNoise noise) {
  TokenReader r(in);
  const auto H = r.count("horizon");
  const auto A = r.count("action count");
  const auto seed = r.count("seed");
  if (H == 0 || A == 0) throw ModelError("instance header needs H >= 1 and A >= 1");
  std::vector<std::size_t> sizes(H);
  for (auto& s : sizes) s = r.count("layer size");
  StateSpace space(sizes, A);
  std::vector<double> rewards(space.num_states() * A);
  std::vector<std::vector<double>> transitions(space.num_states() * A);
  for (StateId x = 0; x < space.num_states(); ++x) {
    const int h = space.layer_of(x);
    const std::size_t k = h < static_cast<int>(H) ? space.layer_size(h + 1) : 0;
    for (Action a = 0; a < A; ++a) {
      rewards[x * A + a] = r.real("reward");
      auto& row = transitions[x * A + a];
      row.resize(k);
      for (auto& p : row) p = r.real("transition probability");
    }
  }
  std::optional<LowRankSpec> spec;
  if (!r.at_end()) {
    LowRankSpec s;
    s.rank = r.count("rank");
    if (s.rank == 0) throw ModelError("low-rank section needs M >= 1");
    s.weights.resize(H > 1 ? space.first_state(static_cast<int>(H)) * A : 0);
    for (auto& w : s.weights) {
      w.resize(s.rank);
      for (auto& v : w) v = r.real("feature weight");
    }
    for (int h = 2; h <= static_cast<int>(H); ++h) {
      std::vector<std::vector<double>> layer(s.rank, std::vector<double>(space.layer_size(h)));
      for (auto& q : layer) {
        for (auto& v : q) v = r.real("basis probability");
      }
      s.basis.push_back(std::move(layer));
    }
    if (!r.at_end()) throw ModelError("trailing data after the low-rank section");
    spec = std::move(s);
  }
  return {LayeredMdp(std::move(space), std::move(rewards), std::move(transitions), noise,
                     std::move(spec)),
          seed};
}

void write_class(std::ostream& out, const HypothesisClass& cls) {
  const auto& sp = *cls.shared_space();
  out << sp.horizon() << ' ' << sp.num_actions() << '\n';
  for (int h = 1; h <= sp.horizon(); ++h) out << (h > 1 ? " " : "") << cls.layer_count(h);
  out << '\n';
  const std::size_t A = sp.num_actions();
  for (int h = 1; h <= sp.horizon(); ++h) {
    for (const auto& t : cls.layer_members(h)) {
      for (std::size_t s = 0; s < sp.layer_size(h); ++s) {
        for (std::size_t a = 0; a < A; ++a) {
          if (a) out << ' ';
          out << format_real(t->values[s * A + a]);
        }
        out << '\n';
      }
    }
  }
}

HypothesisClass read_class(std::istream& in, std::shared_ptr<const StateSpace> space) {
  TokenReader r(in);
  const auto H = r.count("horizon");
  const auto A = r.count("action count");
  if (H != static_cast<std::uint64_t>(space->horizon()) || A != space->num_actions()) {
    throw ModelError("class header does not match the instance");
  }
  std::vector<std::size_t> counts(H);
  for (auto& c : counts) c = r.count("member count");
  std::vector<std::vector<LayerTablePtr>> members(H);
  for (int h = 1; h <= static_cast<int>(H); ++h) {
    for (std::size_t i = 0; i < counts[h - 1]; ++i) {
      auto t = std::make_shared<LayerTable>();
      t->values.resize(space->layer_size(h) * A);
      for (auto& v : t->values) v = r.real("hypothesis value");
      members[h - 1].push_back(std::move(t));
    }
  }
  if (!r.at_end()) throw ModelError("trailing data after the class tables");
  return HypothesisClass(std::move(space), std::move(members));
}

}  // namespace ave
