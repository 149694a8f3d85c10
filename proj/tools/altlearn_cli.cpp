// Copyright 2026 The altlearn Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// altlearn: generate drifting corpora, run the four-algorithm comparison,
// summarize results and sweep (delta, W).
//
// Precedence: --config file > command-line flags > built-in defaults. The
// merged configuration is echoed to stdout and to <out>/config.txt.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "altlearn/experiment.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct FlagSpec {
  const char* key;
  const char* help;
};

// Every ExperimentConfig key reachable from the command line. Flags use
// dashes (--n-abrupt) for keys with underscores (n_abrupt).
const std::vector<FlagSpec>& flag_specs() {
  static const std::vector<FlagSpec> specs{
      {"n_abrupt", "number of abrupt-drift streams"},
      {"n_gradual", "number of gradual-drift streams"},
      {"corpus_seed", "base seed of the corpus"},
      {"length", "samples per stream"},
      {"eta_noise", "sigma of the Gaussian noise on the efficiency profile"},
      {"target_noise", "target noise sigma relative to mean |y|"},
      {"min_segment", "shortest drift segment in samples"},
      {"teacher_hidden", "hidden units of the surrogate teacher"},
      {"teacher_scale", "input weight scale of the surrogate teacher"},
      {"corpus_dir", "load stream specs from a `generate` output directory"},
      {"window", "short window W (also the queue capacity)"},
      {"delta", "reset threshold in (0, 1)"},
      {"tau", "acceptable per-batch error (percent for mape)"},
      {"least_wait", "leastWait n0"},
      {"batch_size", "samples per batch b"},
      {"initial_batches", "initial batches B0"},
      {"lambda", "ridge regularization"},
      {"hidden_width", "hidden units K"},
      {"layer_seed", "seed of the random hidden layer"},
      {"activation", "sigmoid | tanh"},
      {"metric", "mape | mse (registration metric)"},
      {"reset_linear", "reset the linear learner with the OSELM (true|false)"},
      {"shared_layer", "long and short learners share one hidden layer (true|false)"},
      {"standardize", "z-score inputs with initial-set statistics (true|false)"},
      {"output_bias", "intercept column in the ELM design (true|false)"},
      {"select_width", "choose K per stream by cross validation (true|false)"},
      {"width_grid", "candidate widths, comma separated"},
      {"cv_folds", "cross-validation folds"},
      {"cv_repeats", "cross-validation repeats"},
      {"algorithms", "comma separated subset of static_elm,oselm,paired,alternating"},
      {"sweep_deltas", "delta grid for sweep, comma separated"},
      {"sweep_windows", "W grid for sweep, comma separated"},
      {"write_records", "write per-step record CSVs (true|false)"},
      {"jobs", "streams processed in parallel"},
  };
  return specs;
}

std::string dashed(std::string key) {
  for (char& c : key) {
    if (c == '_') c = '-';
  }
  return "--" + key;
}

struct ConfigOptions {
  std::map<std::string, std::string> values;
  std::string config_file;
  std::string out;
};

void add_config_options(CLI::App* cmd, ConfigOptions& opts) {
  cmd->add_option("-c,--config", opts.config_file, "config file (overrides flags)");
  cmd->add_option("-o,--out", opts.out, "output directory")->required();
  for (const auto& f : flag_specs()) cmd->add_option(dashed(f.key), opts.values[f.key], f.help);
}

altlearn::ExperimentConfig merged_config(const CLI::App* cmd, const ConfigOptions& opts) {
  altlearn::ExperimentConfig cfg;
  altlearn::KeyValues flags;
  for (const auto& f : flag_specs()) {
    if (cmd->count(dashed(f.key)) > 0) flags.set(f.key, opts.values.at(f.key));
  }
  altlearn::apply_config(cfg, flags);
  if (!opts.config_file.empty()) {
    std::ifstream in(opts.config_file);
    if (!in) throw altlearn::ConfigError("cannot open config file " + opts.config_file);
    altlearn::apply_config(cfg, altlearn::KeyValues::parse(in));
  }
  cfg.output_dir = opts.out;
  cfg.validate();
  return cfg;
}

int run_summarize(const std::string& run_dir) {
  const std::filesystem::path dir(run_dir);
  std::ifstream in(dir / "per_stream.csv");
  if (!in) throw altlearn::ConfigError("no per_stream.csv in " + dir.string());
  const auto summary = altlearn::summarize(altlearn::read_per_stream_csv(in));
  std::ofstream out(dir / "summary.csv", std::ios::binary);
  altlearn::write_summary_csv(out, summary);
  altlearn::print_summary_table(std::cout, summary);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Alternating-learners concept-drift toolkit"};
  app.require_subcommand(1);

  ConfigOptions gen_opts, run_opts, sweep_opts;
  auto* gen = app.add_subcommand("generate", "write a synthetic drifting corpus");
  add_config_options(gen, gen_opts);
  auto* run = app.add_subcommand("run", "run the algorithm comparison on a corpus");
  add_config_options(run, run_opts);
  auto* sweep = app.add_subcommand("sweep", "sensitivity sweep over delta and W");
  add_config_options(sweep, sweep_opts);
  std::string summarize_dir;
  auto* summ = app.add_subcommand("summarize", "recompute summary.csv from a run directory");
  summ->add_option("run_dir", summarize_dir, "output directory of `run`")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (summ->parsed()) return run_summarize(summarize_dir);

    CLI::App* cmd = gen->parsed() ? gen : run->parsed() ? run : sweep;
    const ConfigOptions& opts = gen->parsed() ? gen_opts : run->parsed() ? run_opts : sweep_opts;
    const altlearn::ExperimentConfig cfg = merged_config(cmd, opts);
    altlearn::write_config(std::cout, cfg);
    std::cout << "# output_dir = " << cfg.output_dir << "\n\n";

    if (gen->parsed()) {
      const auto specs = altlearn::generate_corpus_files(cfg, cfg.output_dir);
      std::cout << "wrote " << specs.size() << " streams to " << cfg.output_dir << '\n';
    } else if (run->parsed()) {
      const auto outcome = altlearn::run_experiment(cfg);
      altlearn::print_summary_table(std::cout, outcome.summary);
    } else {
      const auto cells = altlearn::run_sweep(cfg);
      std::cout << "delta      W     mean   median\n";
      for (const auto& c : cells) {
        std::printf("%-8.2f %3ld %8.4f %8.4f\n", c.delta, static_cast<long>(c.window), c.distribution.mean,
                    c.distribution.median);
      }
    }
    return kExitOk;
  } catch (const altlearn::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const altlearn::NumericalBreakdown& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const altlearn::SingularSystemError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const altlearn::NearZeroTarget& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
