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

// Experiment harness: configuration, per-seed execution, artifacts, and
// regret-curve summaries.

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ave/accounting.hpp"
#include "ave/ave.hpp"
#include "ave/baselines.hpp"
#include "ave/calibration.hpp"
#include "ave/generators.hpp"
#include "ave/schedule.hpp"

namespace ave {

enum class Algorithm { kAve, kOlive, kUniform };

const char* to_string(Algorithm a);
/// Throws ModelError for unknown names.
Algorithm parse_algorithm(const std::string& name);

struct ExperimentConfig {
  // instance
  std::optional<std::filesystem::path> instance_file;
  LowRankConfig generator;
  std::uint64_t instance_seed = 1;
  ClassConfig class_config;
  std::uint64_t class_seed = 1;
  RewardNoise noise = RewardNoise::kDeterministic;

  // algorithms
  std::vector<Algorithm> algorithms{Algorithm::kAve};
  double epsilon = 0.1;
  double delta = 0.1;
  ScaleMultipliers scales{};
  /// Replace `scales` by the exact-variance calibration at prepare time.
  bool calibrate = false;
  std::optional<double> zeta;  // certificate-derived when absent
  PrecisionLogBase log_base = PrecisionLogBase::kTwo;
  OliveOptions olive{};

  // execution
  std::size_t budget = 10'000;
  std::vector<std::uint64_t> seeds{1};
  std::filesystem::path output_dir = "ave-out";
  std::size_t jobs = 1;
};

/// The desk-scale benchmark: H=3, 4 states per layer, A=3, M=2, two
/// distractors per layer (|F| = 27), calibrated scale multipliers, OLIVE
/// with 800 check and 3000 exploration episodes, 50,000 episodes, seeds
/// 1..40.
ExperimentConfig benchmark_config();

/// Sectioned key-value text ([instance], [schedule], [olive], [run]).
/// Throws ModelError on unknown keys or malformed values.
ExperimentConfig load_config(std::istream& in);
ExperimentConfig load_config(const std::filesystem::path& path);
void write_config(std::ostream& out, const ExperimentConfig& config);

/// Throws ModelError when the configuration is unusable.
void validate(const ExperimentConfig& config);

struct PreparedExperiment {
  LayeredMdp mdp;
  HypothesisClass cls;
  std::optional<std::size_t> optimal_index;
  Schedule schedule;
  std::optional<EstimatorVariances> variances;  // set when calibrated
};

PreparedExperiment prepare(const ExperimentConfig& config);

RunOutcome run_algorithm(const PreparedExperiment& prepared, const ExperimentConfig& config,
                         Algorithm algorithm, std::uint64_t seed);

/// Least-squares slope of log(cum_regret) against log(episode) over the
/// final half of the curve; points with zero cumulative regret are skipped.
/// cum_regret[i] belongs to episode i+1. nullopt with fewer than 20
/// episodes or fewer than 10 usable tail points.
std::optional<double> fit_loglog_slope(std::span<const double> cum_regret);
std::optional<double> fit_loglog_slope(const std::vector<LedgerRow>& rows);

struct CurveSummary {
  std::string algorithm;
  std::vector<std::pair<std::uint64_t, double>> final_regret;  // (seed, cum regret)
  double mean = 0.0;
  double stdev = 0.0;
  std::optional<double> tail_slope;  // mean of per-seed slopes
  std::map<std::string, std::size_t, std::less<>> phase_episodes;
  std::vector<std::uint64_t> failed_seeds;
};

/// Aggregates per-seed ledgers of one algorithm.
CurveSummary summarize(const std::string& algorithm,
                       const std::vector<std::pair<std::uint64_t, std::vector<LedgerRow>>>& runs);

void write_summary(std::ostream& out, const CurveSummary& summary);

struct ComparisonRow {
  std::string algorithm;
  double mean_final_regret;
  double stdev;
  std::optional<double> tail_slope;
  double gap_to_best;  // mean_final_regret minus the best row's
  std::size_t seeds;
};

/// Rows sorted by mean final regret ascending, ties by algorithm name.
std::vector<ComparisonRow> compare_runs(std::span<const CurveSummary> summaries);
void write_comparison(std::ostream& out, std::span<const ComparisonRow> rows);

struct ExperimentResult {
  std::vector<CurveSummary> summaries;
  bool all_succeeded = true;
};

/// Runs every (algorithm, seed) pair and writes, under output_dir:
/// ledger_<alg>_seed<s>.csv, report_<alg>_seed<s>.txt, summary_<alg>.txt and
/// comparison.txt. A faulting seed is recorded and the sweep continues.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// Rebuilds summaries from the ledger CSVs found in a directory.
std::vector<CurveSummary> summarize_directory(const std::filesystem::path& dir);

}  // namespace ave
