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

#include "ave/accounting.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "ave/mdp.hpp"

namespace ave {

void Budget::consume() {
  if (consumed_ >= total_) throw BudgetExhausted();
  ++consumed_;
}

void RegretLedger::record(std::string_view phase, double policy_value) {
  constexpr double kSlack = 1e-9;
  if (!(policy_value >= -kSlack && policy_value <= 1.0 + kSlack)) {
    throw ModelError("policy value " + std::to_string(policy_value) + " outside [0,1]");
  }
  double regret = optimal_ - policy_value;
  if (regret < -kSlack) {
    throw ModelError("policy value " + std::to_string(policy_value) + " exceeds the optimum " +
                     std::to_string(optimal_));
  }
  regret = std::clamp(regret, 0.0, 1.0);
  // Neumaier step; regrets are nonnegative so the total never decreases.
  const double t = cum_ + regret;
  if (std::abs(cum_) >= regret) {
    comp_ += (cum_ - t) + regret;
  } else {
    comp_ += (regret - t) + cum_;
  }
  cum_ = t;
  const double total = std::max(cum_ + comp_, cumulative_regret());
  records_.push_back({records_.size() + 1, std::string(phase), policy_value, regret, total});
}

namespace {

std::string g12(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(std::move(cur));
  return out;
}

template <typename T>
T parse_field(const std::string& s, std::size_t line_no) {
  T v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ModelError("ledger line " + std::to_string(line_no) + ": malformed field '" + s + "'");
  }
  return v;
}

}  // namespace

void write_ledger_csv(std::ostream& out, const RegretLedger& ledger, std::string_view algorithm,
                      std::uint64_t seed) {
  out << kLedgerHeader << '\n';
  for (const auto& r : ledger.records()) {
    out << r.episode << ',' << r.phase << ',' << algorithm << ',' << seed << ','
        << g12(r.policy_value) << ',' << g12(r.regret) << ',' << g12(r.cum_regret) << '\n';
  }
}

std::vector<LedgerRow> read_ledger_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ModelError("ledger is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kLedgerHeader) throw ModelError("ledger header mismatch: '" + line + "'");
  std::vector<LedgerRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 7) {
      throw ModelError("ledger line " + std::to_string(line_no) + " has " +
                       std::to_string(f.size()) + " fields");
    }
    rows.push_back({parse_field<std::size_t>(f[0], line_no), f[1], f[2],
                    parse_field<std::uint64_t>(f[3], line_no), parse_field<double>(f[4], line_no),
                    parse_field<double>(f[5], line_no), parse_field<double>(f[6], line_no)});
  }
  return rows;
}

}  // namespace ave
