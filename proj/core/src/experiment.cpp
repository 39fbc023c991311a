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

#include "ave/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <mutex>
#include <numeric>
#include <ostream>
#include <regex>
#include <set>
#include <sstream>
#include <thread>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "ave/oracles.hpp"
#include "ave/serialization.hpp"

namespace ave {

const char* to_string(Algorithm a) {
  switch (a) {
    case Algorithm::kAve:
      return "ave";
    case Algorithm::kOlive:
      return "olive";
    case Algorithm::kUniform:
      return "uniform";
  }
  return "unknown";
}

Algorithm parse_algorithm(const std::string& name) {
  if (name == "ave") return Algorithm::kAve;
  if (name == "olive") return Algorithm::kOlive;
  if (name == "uniform") return Algorithm::kUniform;
  throw ModelError("unknown algorithm '" + name + "' (expected ave, olive or uniform)");
}

ExperimentConfig benchmark_config() {
  ExperimentConfig c;
  c.generator.layer_sizes = {4, 4, 4};
  c.generator.num_actions = 3;
  c.generator.rank = 2;
  c.generator.reward_shape = RewardShape::kUniform;
  c.instance_seed = 7;
  c.class_config.distractors_per_layer = 2;
  c.class_seed = 11;
  c.algorithms = {Algorithm::kAve, Algorithm::kOlive, Algorithm::kUniform};
  c.epsilon = 0.1;
  c.delta = 0.1;
  c.calibrate = true;
  // Textbook OLIVE sizes (8H^2/eps^2, 32AH^2/eps^2) exceed the whole budget.
  c.olive.n_check = 800;
  c.olive.n_explore = 3000;
  c.budget = 50'000;
  c.seeds.clear();
  for (std::uint64_t s = 1; s <= 40; ++s) c.seeds.push_back(s);
  return c;
}

namespace {

namespace pt = boost::property_tree;

template <typename T>
T parse_value(const std::string& key, const std::string& text) {
  std::istringstream is(text);
  T v{};
  if (!(is >> v) || !(is >> std::ws).eof()) {
    throw ModelError("malformed value for '" + key + "': '" + text + "'");
  }
  return v;
}

template <typename T>
std::vector<T> parse_list(const std::string& key, const std::string& text) {
  std::istringstream is(text);
  std::vector<T> out;
  std::string tok;
  while (is >> tok) out.push_back(parse_value<T>(key, tok));
  return out;
}

// Seeds accept a list ("1 2 5") or an inclusive range ("1..40").
std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  const auto dots = text.find("..");
  if (dots == std::string::npos) return parse_list<std::uint64_t>("seeds", text);
  const auto lo = parse_value<std::uint64_t>("seeds", text.substr(0, dots));
  const auto hi = parse_value<std::uint64_t>("seeds", text.substr(dots + 2));
  if (hi < lo) throw ModelError("seed range is empty");
  std::vector<std::uint64_t> out;
  for (auto s = lo; s <= hi; ++s) out.push_back(s);
  return out;
}

RewardShape parse_shape(const std::string& s) {
  if (s == "uniform") return RewardShape::kUniform;
  if (s == "sparse") return RewardShape::kSparse;
  throw ModelError("unknown reward_shape '" + s + "'");
}

RewardNoise parse_noise(const std::string& s) {
  if (s == "deterministic") return RewardNoise::kDeterministic;
  if (s == "bernoulli") return RewardNoise::kBernoulli;
  throw ModelError("unknown noise '" + s + "'");
}

bool parse_bool(const std::string& key, const std::string& s) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ModelError("malformed value for '" + key + "': '" + s + "'");
}

PrecisionLogBase parse_log_base(const std::string& s) {
  if (s == "2") return PrecisionLogBase::kTwo;
  if (s == "e") return PrecisionLogBase::kNatural;
  throw ModelError("log_base must be 2 or e, got '" + s + "'");
}

template <typename T>
std::string join(const std::vector<T>& v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? " " : "") << v[i];
  return os.str();
}

}  // namespace

ExperimentConfig load_config(std::istream& in) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ModelError(std::string("config: ") + e.what());
  }
  ExperimentConfig c;
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty()) {
      throw ModelError("config key '" + section + "' must live inside a section");
    }
    for (const auto& [key, node] : body) {
      const std::string v = node.data();
      const std::string where = section + "." + key;
      if (section == "instance") {
        if (key == "file") c.instance_file = v;
        else if (key == "layers") c.generator.layer_sizes = parse_list<std::size_t>(where, v);
        else if (key == "actions") c.generator.num_actions = parse_value<std::size_t>(where, v);
        else if (key == "rank") c.generator.rank = parse_value<std::size_t>(where, v);
        else if (key == "reward_shape") c.generator.reward_shape = parse_shape(v);
        else if (key == "basis_concentration") c.generator.basis_concentration = parse_value<double>(where, v);
        else if (key == "seed") c.instance_seed = parse_value<std::uint64_t>(where, v);
        else if (key == "distractors") c.class_config.distractors_per_layer = parse_value<std::size_t>(where, v);
        else if (key == "value_grid") c.class_config.value_grid_resolution = parse_value<std::size_t>(where, v);
        else if (key == "enumeration_guard") c.class_config.enumeration_guard = parse_value<std::size_t>(where, v);
        else if (key == "class_seed") c.class_seed = parse_value<std::uint64_t>(where, v);
        else if (key == "noise") c.noise = parse_noise(v);
        else throw ModelError("unknown config key '" + where + "'");
      } else if (section == "schedule") {
        if (key == "epsilon") c.epsilon = parse_value<double>(where, v);
        else if (key == "delta") c.delta = parse_value<double>(where, v);
        else if (key == "scale_eval") c.scales.eval = parse_value<double>(where, v);
        else if (key == "scale_cb") c.scales.cb = parse_value<double>(where, v);
        else if (key == "scale_learn") c.scales.learn = parse_value<double>(where, v);
        else if (key == "scale_identify") c.scales.identify = parse_value<double>(where, v);
        else if (key == "calibrate") c.calibrate = parse_bool(where, v);
        else if (key == "zeta") c.zeta = parse_value<double>(where, v);
        else if (key == "log_base") c.log_base = parse_log_base(v);
        else throw ModelError("unknown config key '" + where + "'");
      } else if (section == "olive") {
        if (key == "epsilon") c.olive.epsilon = parse_value<double>(where, v);
        else if (key == "n_check") c.olive.n_check = parse_value<std::size_t>(where, v);
        else if (key == "n_explore") c.olive.n_explore = parse_value<std::size_t>(where, v);
        else throw ModelError("unknown config key '" + where + "'");
      } else if (section == "run") {
        if (key == "algorithms") {
          c.algorithms.clear();
          std::istringstream is(v);
          std::string name;
          while (is >> name) c.algorithms.push_back(parse_algorithm(name));
        } else if (key == "budget") c.budget = parse_value<std::size_t>(where, v);
        else if (key == "seeds") c.seeds = parse_seeds(v);
        else if (key == "output_dir") c.output_dir = v;
        else if (key == "jobs") c.jobs = parse_value<std::size_t>(where, v);
        else throw ModelError("unknown config key '" + where + "'");
      } else {
        throw ModelError("unknown config section [" + section + "]");
      }
    }
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ModelError("cannot open config " + path.string());
  auto c = load_config(in);
  if (c.instance_file && c.instance_file->is_relative()) {
    c.instance_file = path.parent_path() / *c.instance_file;
  }
  return c;
}

void write_config(std::ostream& out, const ExperimentConfig& c) {
  out << "[instance]\n";
  if (c.instance_file) out << "file = " << c.instance_file->string() << '\n';
  out << "layers = " << join(c.generator.layer_sizes) << '\n'
      << "actions = " << c.generator.num_actions << '\n'
      << "rank = " << c.generator.rank << '\n'
      << "reward_shape = " << (c.generator.reward_shape == RewardShape::kSparse ? "sparse" : "uniform") << '\n'
      << "basis_concentration = " << format_real(c.generator.basis_concentration) << '\n'
      << "seed = " << c.instance_seed << '\n'
      << "distractors = " << c.class_config.distractors_per_layer << '\n'
      << "value_grid = " << c.class_config.value_grid_resolution << '\n'
      << "enumeration_guard = " << c.class_config.enumeration_guard << '\n'
      << "class_seed = " << c.class_seed << '\n'
      << "noise = " << (c.noise == RewardNoise::kBernoulli ? "bernoulli" : "deterministic") << '\n';
  out << "\n[schedule]\n"
      << "epsilon = " << format_real(c.epsilon) << '\n'
      << "delta = " << format_real(c.delta) << '\n'
      << "scale_eval = " << format_real(c.scales.eval) << '\n'
      << "scale_cb = " << format_real(c.scales.cb) << '\n'
      << "scale_learn = " << format_real(c.scales.learn) << '\n'
      << "scale_identify = " << format_real(c.scales.identify) << '\n'
      << "calibrate = " << (c.calibrate ? "true" : "false") << '\n';
  if (c.zeta) out << "zeta = " << format_real(*c.zeta) << '\n';
  out << "log_base = " << (c.log_base == PrecisionLogBase::kNatural ? "e" : "2") << '\n';
  out << "\n[olive]\n"
      << "epsilon = " << format_real(c.olive.epsilon) << '\n'
      << "n_check = " << c.olive.n_check << '\n'
      << "n_explore = " << c.olive.n_explore << '\n';
  std::vector<std::string> algs;
  for (auto a : c.algorithms) algs.emplace_back(to_string(a));
  out << "\n[run]\n"
      << "algorithms = " << join(algs) << '\n'
      << "budget = " << c.budget << '\n'
      << "seeds = " << join(c.seeds) << '\n'
      << "output_dir = " << c.output_dir.string() << '\n'
      << "jobs = " << c.jobs << '\n';
}

void validate(const ExperimentConfig& c) {
  if (c.budget < 1) throw ModelError("budget must be at least 1");
  if (c.seeds.empty()) throw ModelError("no seeds configured");
  if (std::set<std::uint64_t>(c.seeds.begin(), c.seeds.end()).size() != c.seeds.size()) {
    throw ModelError("seeds must be distinct");
  }
  if (c.algorithms.empty()) throw ModelError("no algorithms configured");
  if (c.instance_file && !std::filesystem::exists(*c.instance_file)) {
    throw ModelError("instance file " + c.instance_file->string() + " does not exist");
  }
  if (!(c.epsilon > 0.0 && c.epsilon < 1.0)) throw ModelError("epsilon must lie in (0,1)");
  if (!(c.delta > 0.0 && c.delta < 1.0)) throw ModelError("delta must lie in (0,1)");
  if (c.zeta && !(*c.zeta > 0.0)) throw ModelError("zeta must be positive");
  if (c.jobs < 1) throw ModelError("jobs must be at least 1");
}

PreparedExperiment prepare(const ExperimentConfig& c) {
  validate(c);
  auto mdp = [&] {
    if (!c.instance_file) return gen_low_rank_mdp([&] {
      auto g = c.generator;
      g.noise = c.noise;
      return g;
    }(), c.instance_seed);
    std::ifstream in(*c.instance_file);
    if (!in) throw ModelError("cannot open instance " + c.instance_file->string());
    return read_instance(in, c.noise).mdp;
  }();
  auto gen = gen_hypothesis_class(mdp, c.class_config, c.class_seed);
  double zeta = 0.0;
  if (c.zeta) {
    zeta = *c.zeta;
  } else if (mdp.low_rank()) {
    zeta = certified_zeta(mdp, gen.cls);
  } else {
    throw ModelError("instance has no low-rank certificate; set schedule.zeta");
  }
  ScheduleInputs in;
  in.epsilon = c.epsilon;
  in.delta = c.delta;
  in.num_actions = mdp.num_actions();
  in.rank = mdp.low_rank() ? mdp.low_rank()->rank : c.generator.rank;
  in.horizon = mdp.horizon();
  in.class_size = gen.cls.size();
  in.scales = c.scales;
  in.log_base = c.log_base;
  in.zeta = zeta;
  // A certificate can be degenerate (for a class that only holds f*, every
  // error is zero); any zeta above 2 phi_L is then valid.
  const int L = static_cast<int>(std::ceil(std::log2(in.horizon / in.epsilon)));
  const double floor = 2.0 * std::ldexp(1.0, -L) / (12.0 * std::sqrt(static_cast<double>(in.rank)));
  if (!c.zeta && !(in.zeta > floor)) in.zeta = 1.0;
  std::optional<EstimatorVariances> variances;
  if (c.calibrate) {
    variances = estimator_variances(mdp, gen.cls);
    in.scales = calibrated_scales(*variances, in);
  }
  auto schedule = make_schedule(in);
  return {std::move(mdp), std::move(gen.cls), gen.optimal_index, std::move(schedule), variances};
}

RunOutcome run_algorithm(const PreparedExperiment& p, const ExperimentConfig& c, Algorithm algorithm,
                         std::uint64_t seed) {
  switch (algorithm) {
    case Algorithm::kAve:
      return ave_main(p.mdp, p.cls, p.schedule, c.budget, seed);
    case Algorithm::kOlive:
      return olive_baseline(p.mdp, p.cls, c.budget, c.olive, seed);
    case Algorithm::kUniform:
      return uniform_baseline(p.mdp, c.budget, seed);
  }
  throw ModelError("unknown algorithm");
}

std::optional<double> fit_loglog_slope(std::span<const double> cum) {
  const std::size_t n = cum.size();
  if (n < 20) return std::nullopt;
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = n / 2; i < n; ++i) {
    if (cum[i] > 0.0) pts.emplace_back(std::log(static_cast<double>(i + 1)), std::log(cum[i]));
  }
  if (pts.size() < 10) return std::nullopt;
  double mx = 0.0;
  double my = 0.0;
  for (const auto& [x, y] : pts) {
    mx += x;
    my += y;
  }
  mx /= static_cast<double>(pts.size());
  my /= static_cast<double>(pts.size());
  double sxx = 0.0;
  double sxy = 0.0;
  for (const auto& [x, y] : pts) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  if (sxx == 0.0) return std::nullopt;
  return sxy / sxx;
}

std::optional<double> fit_loglog_slope(const std::vector<LedgerRow>& rows) {
  std::vector<double> cum(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) cum[i] = rows[i].cum_regret;
  return fit_loglog_slope(cum);
}

CurveSummary summarize(const std::string& algorithm,
                       const std::vector<std::pair<std::uint64_t, std::vector<LedgerRow>>>& runs) {
  CurveSummary s;
  s.algorithm = algorithm;
  std::vector<double> slopes;
  for (const auto& [seed, rows] : runs) {
    const double final_regret = rows.empty() ? 0.0 : rows.back().cum_regret;
    s.final_regret.emplace_back(seed, final_regret);
    if (auto slope = fit_loglog_slope(rows)) slopes.push_back(*slope);
    for (const auto& r : rows) ++s.phase_episodes[r.phase];
  }
  const double n = static_cast<double>(s.final_regret.size());
  if (n > 0) {
    for (const auto& [seed, v] : s.final_regret) s.mean += v;
    s.mean /= n;
    if (n > 1) {
      double ss = 0.0;
      for (const auto& [seed, v] : s.final_regret) ss += (v - s.mean) * (v - s.mean);
      s.stdev = std::sqrt(ss / (n - 1.0));
    }
  }
  if (!slopes.empty()) {
    s.tail_slope = std::accumulate(slopes.begin(), slopes.end(), 0.0) / static_cast<double>(slopes.size());
  }
  return s;
}

void write_summary(std::ostream& out, const CurveSummary& s) {
  out << "algorithm = " << s.algorithm << '\n'
      << "seeds = " << s.final_regret.size() << '\n'
      << "mean_final_regret = " << format_real(s.mean) << '\n'
      << "stdev_final_regret = " << format_real(s.stdev) << '\n'
      << "tail_slope = " << (s.tail_slope ? format_real(*s.tail_slope) : "undefined") << '\n';
  out << "failed_seeds =";
  for (auto seed : s.failed_seeds) out << ' ' << seed;
  out << "\n\n[final_regret]\n";
  for (const auto& [seed, v] : s.final_regret) out << "seed" << seed << " = " << format_real(v) << '\n';
  out << "\n[phase_episodes]\n";
  for (const auto& [phase, n] : s.phase_episodes) out << phase << " = " << n << '\n';
}

std::vector<ComparisonRow> compare_runs(std::span<const CurveSummary> summaries) {
  std::vector<ComparisonRow> rows;
  for (const auto& s : summaries) {
    rows.push_back({s.algorithm, s.mean, s.stdev, s.tail_slope, 0.0, s.final_regret.size()});
  }
  std::sort(rows.begin(), rows.end(), [](const ComparisonRow& a, const ComparisonRow& b) {
    if (a.mean_final_regret != b.mean_final_regret) return a.mean_final_regret < b.mean_final_regret;
    return a.algorithm < b.algorithm;
  });
  if (!rows.empty()) {
    const double best = rows.front().mean_final_regret;
    for (auto& r : rows) r.gap_to_best = r.mean_final_regret - best;
  }
  return rows;
}

void write_comparison(std::ostream& out, std::span<const ComparisonRow> rows) {
  out << "algorithm,seeds,mean_final_regret,stdev,tail_slope,gap_to_best\n";
  for (const auto& r : rows) {
    out << r.algorithm << ',' << r.seeds << ',' << format_real(r.mean_final_regret) << ','
        << format_real(r.stdev) << ',' << (r.tail_slope ? format_real(*r.tail_slope) : "undefined")
        << ',' << format_real(r.gap_to_best) << '\n';
  }
}

namespace {

std::filesystem::path ledger_path(const std::filesystem::path& dir, Algorithm a, std::uint64_t seed) {
  return dir / ("ledger_" + std::string(to_string(a)) + "_seed" + std::to_string(seed) + ".csv");
}

std::filesystem::path report_path(const std::filesystem::path& dir, Algorithm a, std::uint64_t seed) {
  return dir / ("report_" + std::string(to_string(a)) + "_seed" + std::to_string(seed) + ".txt");
}

struct SeedResult {
  std::vector<LedgerRow> rows;
  bool failed = false;
};

SeedResult run_one(const PreparedExperiment& p, const ExperimentConfig& c, Algorithm a,
                   std::uint64_t seed) {
  SeedResult r;
  std::optional<RunOutcome> outcome;
  try {
    outcome.emplace(run_algorithm(p, c, a, seed));
  } catch (const std::exception& e) {
    std::ofstream rep(report_path(c.output_dir, a, seed));
    rep << "algorithm = " << to_string(a) << "\nseed = " << seed
        << "\ntermination = fault\nfault = " << e.what() << '\n';
    r.failed = true;
    return r;
  }
  auto& out = *outcome;
  out.report.seed = seed;
  r.failed = out.report.termination == Termination::kFault;
  {
    std::ofstream rep(report_path(c.output_dir, a, seed));
    write_report(rep, out.report);
  }
  std::ostringstream csv;
  write_ledger_csv(csv, out.ledger, to_string(a), seed);
  {
    std::ofstream f(ledger_path(c.output_dir, a, seed), std::ios::binary);
    f << csv.str();
  }
  std::istringstream back(csv.str());
  r.rows = read_ledger_csv(back);
  return r;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config) {
  const auto prepared = prepare(config);
  std::filesystem::create_directories(config.output_dir);
  {
    std::ofstream cfg(config.output_dir / "config.ini");
    write_config(cfg, config);
  }
  ExperimentResult result;
  for (auto a : config.algorithms) {
    std::vector<SeedResult> per_seed(config.seeds.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t i = next++; i < config.seeds.size(); i = next++) {
        per_seed[i] = run_one(prepared, config, a, config.seeds[i]);
      }
    };
    const std::size_t jobs = std::min(config.jobs, config.seeds.size());
    std::vector<std::thread> threads;
    for (std::size_t t = 1; t < jobs; ++t) threads.emplace_back(worker);
    worker();
    for (auto& t : threads) t.join();

    std::vector<std::pair<std::uint64_t, std::vector<LedgerRow>>> runs;
    std::vector<std::uint64_t> failed;
    for (std::size_t i = 0; i < config.seeds.size(); ++i) {
      if (per_seed[i].failed) failed.push_back(config.seeds[i]);
      if (!per_seed[i].rows.empty()) runs.emplace_back(config.seeds[i], std::move(per_seed[i].rows));
    }
    auto summary = summarize(to_string(a), runs);
    summary.failed_seeds = failed;
    if (!failed.empty()) result.all_succeeded = false;
    std::ofstream out(config.output_dir / ("summary_" + std::string(to_string(a)) + ".txt"));
    write_summary(out, summary);
    result.summaries.push_back(std::move(summary));
  }
  std::ofstream cmp(config.output_dir / "comparison.txt");
  write_comparison(cmp, compare_runs(result.summaries));
  return result;
}

std::vector<CurveSummary> summarize_directory(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw ModelError(dir.string() + " is not a directory");
  const std::regex name(R"(ledger_([a-z]+)_seed([0-9]+)\.csv)");
  std::map<std::string, std::vector<std::pair<std::uint64_t, std::vector<LedgerRow>>>> grouped;
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  for (const auto& path : files) {
    std::smatch m;
    const std::string file = path.filename().string();
    if (!std::regex_match(file, m, name)) continue;
    std::ifstream in(path);
    grouped[m[1]].emplace_back(std::stoull(m[2]), read_ledger_csv(in));
  }
  std::vector<CurveSummary> out;
  for (auto& [alg, runs] : grouped) {
    std::sort(runs.begin(), runs.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    out.push_back(summarize(alg, runs));
  }
  return out;
}

}  // namespace ave
