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
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ave {

/// Raised when an episode is requested after the allowance is used up.
class BudgetExhausted : public std::runtime_error {
 public:
  BudgetExhausted() : std::runtime_error("episode budget exhausted") {}
};

class Budget {
 public:
  explicit Budget(std::size_t total) : total_(total) {}

  /// Reserves one episode; throws BudgetExhausted when none remain.
  void consume();

  std::size_t total() const { return total_; }
  std::size_t consumed() const { return consumed_; }
  std::size_t remaining() const { return total_ - consumed_; }
  bool exhausted() const { return consumed_ >= total_; }

 private:
  std::size_t total_;
  std::size_t consumed_ = 0;
};

struct LedgerRecord {
  std::size_t episode;  // 1-based
  std::string phase;
  double policy_value;
  double regret;
  double cum_regret;
};

/// Per-episode regret against V*. Single writer.
class RegretLedger {
 public:
  explicit RegretLedger(double optimal_value) : optimal_(optimal_value) {}

  /// Appends one episode. Throws ModelError if the policy value exceeds V*
  /// by more than 1e-9 or lies outside [0,1].
  void record(std::string_view phase, double policy_value);

  const std::vector<LedgerRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }
  double cumulative_regret() const { return records_.empty() ? 0.0 : records_.back().cum_regret; }
  double optimal_value() const { return optimal_; }

 private:
  double optimal_;
  std::vector<LedgerRecord> records_;
  double cum_ = 0.0;
  double comp_ = 0.0;
};

inline constexpr std::string_view kLedgerHeader =
    "episode,phase,algorithm,seed,policy_value,regret,cum_regret";

/// CSV with kLedgerHeader; reals printed with 12 significant digits.
void write_ledger_csv(std::ostream& out, const RegretLedger& ledger, std::string_view algorithm,
                      std::uint64_t seed);

struct LedgerRow {
  std::size_t episode;
  std::string phase;
  std::string algorithm;
  std::uint64_t seed;
  double policy_value;
  double regret;
  double cum_regret;
};

/// Throws ModelError on a schema mismatch.
std::vector<LedgerRow> read_ledger_csv(std::istream& in);

}  // namespace ave
