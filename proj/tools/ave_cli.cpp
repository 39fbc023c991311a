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

// Command line front end: gen-env, run, sweep, report.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ave/experiment.hpp"
#include "ave/oracles.hpp"
#include "ave/serialization.hpp"

namespace {

using ave::ExperimentConfig;

// Flags that mirror ExperimentConfig. Only options given on the command
// line override the base configuration.
struct ConfigFlags {
  std::string config_file;
  bool benchmark = false;
  std::string instance_file;
  std::vector<std::size_t> layers;
  std::size_t actions = 0;
  std::size_t rank = 0;
  std::string reward_shape;
  double basis_concentration = 0.0;
  std::uint64_t instance_seed = 0;
  std::size_t distractors = 0;
  std::size_t value_grid = 0;
  std::uint64_t class_seed = 0;
  std::string noise;
  std::vector<std::string> algorithms;
  double epsilon = 0.0;
  double delta = 0.0;
  double scale_eval = 0.0;
  double scale_cb = 0.0;
  double scale_learn = 0.0;
  double scale_identify = 0.0;
  bool calibrate = false;
  double zeta = 0.0;
  std::string log_base;
  double olive_epsilon = 0.0;
  std::size_t olive_n_check = 0;
  std::size_t olive_n_explore = 0;
  std::size_t budget = 0;
  std::string seeds;
  std::string output_dir;
  std::size_t jobs = 0;

  std::vector<CLI::Option*> given;
  std::map<std::string, CLI::Option*> opts;

  void attach(CLI::App* app, bool with_run_flags) {
    auto add = [&](const std::string& name, auto& target, const std::string& help) {
      opts[name] = app->add_option("--" + name, target, help);
    };
    app->add_option("--config", config_file, "INI configuration file")->check(CLI::ExistingFile);
    app->add_flag("--benchmark", benchmark, "start from the built-in benchmark configuration");
    add("instance-file", instance_file, "instance text file instead of the generator");
    opts["layers"] = app->add_option("--layers", layers, "states per layer")->expected(1, -1);
    add("actions", actions, "number of actions");
    add("rank", rank, "low-rank dimension M");
    add("reward-shape", reward_shape, "uniform | sparse");
    add("basis-concentration", basis_concentration, "Dirichlet concentration of basis rows");
    add("instance-seed", instance_seed, "generator seed");
    add("distractors", distractors, "distractor tables per layer");
    add("value-grid", value_grid, "distractor value grid resolution (0 = continuous)");
    add("class-seed", class_seed, "hypothesis class seed");
    add("noise", noise, "deterministic | bernoulli");
    if (!with_run_flags) return;
    opts["algorithms"] = app->add_option("--algorithms", algorithms, "ave olive uniform")->expected(1, -1);
    add("epsilon", epsilon, "target precision");
    add("delta", delta, "confidence");
    add("scale-eval", scale_eval, "n^eval multiplier");
    add("scale-cb", scale_cb, "n^cb multiplier");
    add("scale-learn", scale_learn, "n multiplier");
    add("scale-identify", scale_identify, "n^id multiplier");
    opts["calibrate"] = app->add_flag("--calibrate", calibrate, "derive multipliers from exact variances");
    add("zeta", zeta, "factorization norm bound");
    add("log-base", log_base, "2 | e");
    add("olive-epsilon", olive_epsilon, "OLIVE tolerance");
    add("olive-n-check", olive_n_check, "OLIVE verification episodes");
    add("olive-n-explore", olive_n_explore, "OLIVE exploration episodes");
    add("budget", budget, "episodes per run");
    add("seeds", seeds, "seed list '1 2 3' or range '1..40'");
    add("output-dir", output_dir, "artifact directory (AVE_OUTPUT_DIR overrides)");
    add("jobs", jobs, "parallel seeds");
  }

  bool has(const std::string& name) const {
    auto it = opts.find(name);
    return it != opts.end() && it->second->count() > 0;
  }

  ExperimentConfig build() const {
    ExperimentConfig c = benchmark ? ave::benchmark_config() : ExperimentConfig{};
    if (!config_file.empty()) {
      if (benchmark) {
        // The file refines the benchmark rather than replacing it.
        std::ifstream file(config_file);
        apply_overrides(c, file);
      } else {
        c = ave::load_config(std::filesystem::path(config_file));
      }
    }
    // Reuse the config parser for value syntax by rendering overrides as INI.
    std::ostringstream ini;
    ave::write_config(ini, c);
    std::ostringstream extra_instance;
    std::ostringstream extra_schedule;
    std::ostringstream extra_olive;
    std::ostringstream extra_run;
    auto join = [](const auto& v) {
      std::ostringstream os;
      for (std::size_t i = 0; i < v.size(); ++i) os << (i ? " " : "") << v[i];
      return os.str();
    };
    if (has("instance-file")) extra_instance << "file = " << instance_file << '\n';
    if (has("layers")) extra_instance << "layers = " << join(layers) << '\n';
    if (has("actions")) extra_instance << "actions = " << actions << '\n';
    if (has("rank")) extra_instance << "rank = " << rank << '\n';
    if (has("reward-shape")) extra_instance << "reward_shape = " << reward_shape << '\n';
    if (has("basis-concentration")) extra_instance << "basis_concentration = " << ave::format_real(basis_concentration) << '\n';
    if (has("instance-seed")) extra_instance << "seed = " << instance_seed << '\n';
    if (has("distractors")) extra_instance << "distractors = " << distractors << '\n';
    if (has("value-grid")) extra_instance << "value_grid = " << value_grid << '\n';
    if (has("class-seed")) extra_instance << "class_seed = " << class_seed << '\n';
    if (has("noise")) extra_instance << "noise = " << noise << '\n';
    if (has("epsilon")) extra_schedule << "epsilon = " << ave::format_real(epsilon) << '\n';
    if (has("delta")) extra_schedule << "delta = " << ave::format_real(delta) << '\n';
    if (has("scale-eval")) extra_schedule << "scale_eval = " << ave::format_real(scale_eval) << '\n';
    if (has("scale-cb")) extra_schedule << "scale_cb = " << ave::format_real(scale_cb) << '\n';
    if (has("scale-learn")) extra_schedule << "scale_learn = " << ave::format_real(scale_learn) << '\n';
    if (has("scale-identify")) extra_schedule << "scale_identify = " << ave::format_real(scale_identify) << '\n';
    if (has("calibrate")) extra_schedule << "calibrate = " << (calibrate ? "true" : "false") << '\n';
    if (has("zeta")) extra_schedule << "zeta = " << ave::format_real(zeta) << '\n';
    if (has("log-base")) extra_schedule << "log_base = " << log_base << '\n';
    if (has("olive-epsilon")) extra_olive << "epsilon = " << ave::format_real(olive_epsilon) << '\n';
    if (has("olive-n-check")) extra_olive << "n_check = " << olive_n_check << '\n';
    if (has("olive-n-explore")) extra_olive << "n_explore = " << olive_n_explore << '\n';
    if (has("algorithms")) extra_run << "algorithms = " << join(algorithms) << '\n';
    if (has("budget")) extra_run << "budget = " << budget << '\n';
    if (has("seeds")) extra_run << "seeds = " << seeds << '\n';
    if (has("output-dir")) extra_run << "output_dir = " << output_dir << '\n';
    if (has("jobs")) extra_run << "jobs = " << jobs << '\n';

    // Later keys win: apply the base first, then the overrides section by section.
    std::istringstream base_in(ini.str());
    ExperimentConfig merged = ave::load_config(base_in);
    merged.instance_file = c.instance_file;
    merged.zeta = c.zeta;
    std::ostringstream over;
    over << "[instance]\n" << extra_instance.str() << "[schedule]\n" << extra_schedule.str()
         << "[olive]\n" << extra_olive.str() << "[run]\n" << extra_run.str();
    std::istringstream over_in(over.str());
    apply_overrides(merged, over_in);
    if (const char* env = std::getenv("AVE_OUTPUT_DIR"); env && *env) merged.output_dir = env;
    return merged;
  }

  static void apply_overrides(ExperimentConfig& base, std::istream& in) {
    // Parse the override text on top of a default config, then copy over only
    // the fields whose keys appear.
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    std::istringstream parse_in(text);
    const ExperimentConfig o = ave::load_config(parse_in);
    std::set<std::pair<std::string, std::string>> keys;
    {
      std::istringstream lines(text);
      std::string line, section;
      auto trim = [](std::string v) {
        const auto b = v.find_first_not_of(" \t\r");
        const auto e = v.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string() : v.substr(b, e - b + 1);
      };
      while (std::getline(lines, line)) {
        line = trim(line.substr(0, line.find_first_of(";#")));
        if (line.empty()) continue;
        if (line.front() == '[') {
          section = trim(line.substr(1, line.find(']') - 1));
        } else if (const auto eq = line.find('='); eq != std::string::npos) {
          keys.emplace(section, trim(line.substr(0, eq)));
        }
      }
    }
    auto present = [&](const std::string& section, const std::string& key) {
      return keys.count({section, key}) > 0;
    };
    if (present("instance", "file")) base.instance_file = o.instance_file;
    if (present("instance", "layers")) base.generator.layer_sizes = o.generator.layer_sizes;
    if (present("instance", "actions")) base.generator.num_actions = o.generator.num_actions;
    if (present("instance", "rank")) base.generator.rank = o.generator.rank;
    if (present("instance", "reward_shape")) base.generator.reward_shape = o.generator.reward_shape;
    if (present("instance", "basis_concentration")) base.generator.basis_concentration = o.generator.basis_concentration;
    if (present("instance", "seed")) base.instance_seed = o.instance_seed;
    if (present("instance", "distractors")) base.class_config.distractors_per_layer = o.class_config.distractors_per_layer;
    if (present("instance", "value_grid")) base.class_config.value_grid_resolution = o.class_config.value_grid_resolution;
    if (present("instance", "enumeration_guard")) base.class_config.enumeration_guard = o.class_config.enumeration_guard;
    if (present("instance", "class_seed")) base.class_seed = o.class_seed;
    if (present("instance", "noise")) base.noise = o.noise;
    if (present("schedule", "epsilon")) base.epsilon = o.epsilon;
    if (present("schedule", "delta")) base.delta = o.delta;
    if (present("schedule", "scale_eval")) base.scales.eval = o.scales.eval;
    if (present("schedule", "scale_cb")) base.scales.cb = o.scales.cb;
    if (present("schedule", "scale_learn")) base.scales.learn = o.scales.learn;
    if (present("schedule", "scale_identify")) base.scales.identify = o.scales.identify;
    if (present("schedule", "calibrate")) base.calibrate = o.calibrate;
    if (present("schedule", "zeta")) base.zeta = o.zeta;
    if (present("schedule", "log_base")) base.log_base = o.log_base;
    if (present("olive", "epsilon")) base.olive.epsilon = o.olive.epsilon;
    if (present("olive", "n_check")) base.olive.n_check = o.olive.n_check;
    if (present("olive", "n_explore")) base.olive.n_explore = o.olive.n_explore;
    if (present("run", "algorithms")) base.algorithms = o.algorithms;
    if (present("run", "budget")) base.budget = o.budget;
    if (present("run", "seeds")) base.seeds = o.seeds;
    if (present("run", "output_dir")) base.output_dir = o.output_dir;
    if (present("run", "jobs")) base.jobs = o.jobs;
  }
};

void print_summaries(const std::vector<ave::CurveSummary>& summaries) {
  for (const auto& s : summaries) {
    std::cout << s.algorithm << ": mean final regret " << s.mean << " over "
              << s.final_regret.size() << " seeds";
    if (s.tail_slope) std::cout << ", tail slope " << *s.tail_slope;
    if (!s.failed_seeds.empty()) std::cout << ", " << s.failed_seeds.size() << " faulted";
    std::cout << '\n';
  }
}

int run_sweep(const ExperimentConfig& config) {
  const auto result = ave::run_experiment(config);
  print_summaries(result.summaries);
  std::cout << "artifacts in " << config.output_dir.string() << '\n';
  return result.all_succeeded ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulation lab for adaptive value-function elimination"};
  app.require_subcommand(1);

  ConfigFlags gen_flags;
  std::string instance_out;
  std::string class_out;
  auto* gen = app.add_subcommand("gen-env", "generate a low-rank instance and its hypothesis class");
  gen_flags.attach(gen, false);
  gen->add_option("-o,--out", instance_out, "instance file to write")->required();
  gen->add_option("--class-out", class_out, "hypothesis class file to write");

  ConfigFlags run_flags;
  std::uint64_t run_seed = 1;
  auto* run = app.add_subcommand("run", "run the configured algorithms for one seed");
  run_flags.attach(run, true);
  run->add_option("--seed", run_seed, "seed of this run");

  ConfigFlags sweep_flags;
  auto* sweep = app.add_subcommand("sweep", "run the configured algorithms for every seed");
  sweep_flags.attach(sweep, true);

  std::string report_dir;
  auto* report = app.add_subcommand("report", "summarize ledgers found in a directory");
  report->add_option("dir", report_dir, "directory with ledger_*.csv files")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      const auto config = gen_flags.build();
      const auto prepared = ave::prepare(config);
      std::ofstream out(instance_out);
      if (!out) throw ave::ModelError("cannot write " + instance_out);
      ave::write_instance(out, prepared.mdp, config.instance_seed);
      if (!class_out.empty()) {
        std::ofstream cls(class_out);
        if (!cls) throw ave::ModelError("cannot write " + class_out);
        ave::write_class(cls, prepared.cls);
      }
      std::cout << "instance: H=" << prepared.mdp.horizon() << " A=" << prepared.mdp.num_actions()
                << " |F|=" << prepared.cls.size() << " V*=" << ave::optimal_value(prepared.mdp)
                << " zeta=" << prepared.schedule.inputs().zeta << '\n';
      return 0;
    }
    if (run->parsed()) {
      auto config = run_flags.build();
      config.seeds = {run_seed};
      return run_sweep(config);
    }
    if (sweep->parsed()) return run_sweep(sweep_flags.build());
    if (report->parsed()) {
      const auto summaries = ave::summarize_directory(report_dir);
      if (summaries.empty()) throw ave::ModelError("no ledgers found in " + report_dir);
      print_summaries(summaries);
      const auto rows = ave::compare_runs(summaries);
      ave::write_comparison(std::cout, rows);
      std::ofstream cmp(std::filesystem::path(report_dir) / "comparison.txt");
      ave::write_comparison(cmp, rows);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
