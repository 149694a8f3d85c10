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

#ifndef ALTLEARN_EXPERIMENT_HPP_
#define ALTLEARN_EXPERIMENT_HPP_

// Corpus-level experiment runner behind the command-line tool. Every output
// is a pure function of the result-affecting configuration keys; thread count
// and output location do not change a byte.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "altlearn/baselines.hpp"
#include "altlearn/controller.hpp"
#include "altlearn/drift_sim.hpp"
#include "altlearn/elm.hpp"
#include "altlearn/key_value.hpp"
#include "altlearn/metrics.hpp"
#include "altlearn/parallel.hpp"
#include "altlearn/sensitivity.hpp"

namespace altlearn {

inline constexpr const char* kExperimentFormat = "altlearn-experiment/1";
inline constexpr const char* kVersion = "0.1.0";

struct ExperimentConfig {
  // Corpus.
  std::size_t n_abrupt = 20;
  std::size_t n_gradual = 20;
  std::uint64_t corpus_seed = 2026;
  CorpusOptions corpus;
  std::string corpus_dir;  // load stream specs from a `generate` output instead

  ControllerConfig controller;

  // Per-stream width selection on the initial dataset.
  bool select_width = false;
  std::vector<Index> width_grid{10, 20, 30, 50, 80};
  Index cv_folds = 5;
  Index cv_repeats = 3;

  std::vector<Algorithm> algorithms = all_algorithms();

  std::vector<double> sweep_deltas{0.2, 0.3, 0.4, 0.5, 0.6, 0.7};
  std::vector<Index> sweep_windows{20, 30, 40};

  bool write_records = true;

  // Not echoed: they do not affect results.
  std::string output_dir = "altlearn-out";
  std::size_t jobs = 1;

  void validate() const {
    try {
      controller.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    if (corpus_dir.empty() && n_abrupt + n_gradual == 0) throw ConfigError("config: empty corpus");
    if (corpus.length <= controller.initial_samples()) {
      throw ConfigError("config: stream length must exceed initial_batches * batch_size");
    }
    if (corpus_dir.empty()) {
      const Index m = std::max<Index>(corpus.min_segment, 2);
      if (n_abrupt > 0 && 3 * m > corpus.length - 1) {
        throw ConfigError("config: abrupt streams need length > 3 * min_segment");
      }
      if (n_gradual > 0 && 2 * m > corpus.length - 1) {
        throw ConfigError("config: gradual streams need length > 2 * min_segment");
      }
    }
    if (algorithms.empty()) throw ConfigError("config: no algorithms selected");
    if (select_width && width_grid.empty()) throw ConfigError("config: empty width_grid");
    if (cv_folds < 2) throw ConfigError("config: cv_folds must be >= 2");
    if (cv_repeats < 1) throw ConfigError("config: cv_repeats must be >= 1");
    for (double d : sweep_deltas) {
      if (!(d > 0.0 && d < 1.0)) throw ConfigError("config: sweep_deltas must lie in (0, 1)");
    }
    for (Index w : sweep_windows) {
      if (w < controller.least_wait) throw ConfigError("config: sweep_windows must be >= least_wait");
    }
    if (jobs < 1) throw ConfigError("config: jobs must be >= 1");
  }
};

namespace detail {

inline std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <typename T, typename F>
std::string join(const std::vector<T>& items, F&& f) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ',';
    out += f(items[i]);
  }
  return out;
}

}  // namespace detail

/// Overrides fields of `cfg` with every key present in `kv`. Unknown keys are
/// rejected so typos do not silently fall back to defaults.
inline void apply_config(ExperimentConfig& cfg, const KeyValues& kv) {
  for (const auto& [key, value] : kv.entries()) {
    auto& c = cfg.controller;
    if (key == "format") {
      if (value != kExperimentFormat) throw ConfigError("unsupported config format '" + value + "'");
    } else if (key == "n_abrupt") {
      cfg.n_abrupt = static_cast<std::size_t>(kv.get_u64(key));
    } else if (key == "n_gradual") {
      cfg.n_gradual = static_cast<std::size_t>(kv.get_u64(key));
    } else if (key == "corpus_seed") {
      cfg.corpus_seed = kv.get_u64(key);
    } else if (key == "length") {
      cfg.corpus.length = static_cast<Index>(kv.get_int(key));
    } else if (key == "eta_noise") {
      cfg.corpus.eta_noise = kv.get_double(key);
    } else if (key == "target_noise") {
      cfg.corpus.target_noise = kv.get_double(key);
    } else if (key == "min_segment") {
      cfg.corpus.min_segment = static_cast<Index>(kv.get_int(key));
    } else if (key == "teacher_hidden") {
      cfg.corpus.teacher_hidden = static_cast<Index>(kv.get_int(key));
    } else if (key == "teacher_scale") {
      cfg.corpus.teacher_scale = kv.get_double(key);
    } else if (key == "corpus_dir") {
      cfg.corpus_dir = value;
    } else if (key == "window") {
      c.window = static_cast<Index>(kv.get_int(key));
    } else if (key == "delta") {
      c.delta = kv.get_double(key);
    } else if (key == "tau") {
      c.tau = kv.get_double(key);
    } else if (key == "least_wait") {
      c.least_wait = static_cast<Index>(kv.get_int(key));
    } else if (key == "batch_size") {
      c.batch_size = static_cast<Index>(kv.get_int(key));
    } else if (key == "initial_batches") {
      c.initial_batches = static_cast<Index>(kv.get_int(key));
    } else if (key == "lambda") {
      c.lambda = kv.get_double(key);
    } else if (key == "hidden_width") {
      c.hidden_width = static_cast<Index>(kv.get_int(key));
    } else if (key == "layer_seed") {
      c.seed = kv.get_u64(key);
    } else if (key == "activation") {
      try {
        c.activation = parse_activation(value);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
    } else if (key == "metric") {
      try {
        c.metric = parse_metric(value);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
    } else if (key == "reset_linear") {
      c.reset_linear = kv.get_bool(key);
    } else if (key == "shared_layer") {
      c.shared_layer = kv.get_bool(key);
    } else if (key == "standardize") {
      c.standardize = kv.get_bool(key);
    } else if (key == "output_bias") {
      c.output_bias = kv.get_bool(key);
    } else if (key == "select_width") {
      cfg.select_width = kv.get_bool(key);
    } else if (key == "width_grid") {
      cfg.width_grid.clear();
      for (long long w : kv.get_ints(key)) cfg.width_grid.push_back(static_cast<Index>(w));
    } else if (key == "cv_folds") {
      cfg.cv_folds = static_cast<Index>(kv.get_int(key));
    } else if (key == "cv_repeats") {
      cfg.cv_repeats = static_cast<Index>(kv.get_int(key));
    } else if (key == "algorithms") {
      cfg.algorithms.clear();
      for (const auto& a : kv.get_strings(key)) {
        try {
          cfg.algorithms.push_back(parse_algorithm(a));
        } catch (const std::invalid_argument& e) {
          throw ConfigError(e.what());
        }
      }
    } else if (key == "sweep_deltas") {
      cfg.sweep_deltas = kv.get_doubles(key);
    } else if (key == "sweep_windows") {
      cfg.sweep_windows.clear();
      for (long long w : kv.get_ints(key)) cfg.sweep_windows.push_back(static_cast<Index>(w));
    } else if (key == "write_records") {
      cfg.write_records = kv.get_bool(key);
    } else if (key == "output_dir") {
      cfg.output_dir = value;
    } else if (key == "jobs") {
      cfg.jobs = static_cast<std::size_t>(kv.get_u64(key));
    } else {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }
}

/// Canonical echo of every result-affecting key.
inline void write_config(std::ostream& os, const ExperimentConfig& cfg) {
  const auto& c = cfg.controller;
  auto b = [](bool v) { return v ? "true" : "false"; };
  os << "format = " << kExperimentFormat << '\n'
     << "# corpus\n"
     << "n_abrupt = " << cfg.n_abrupt << '\n'
     << "n_gradual = " << cfg.n_gradual << '\n'
     << "corpus_seed = " << cfg.corpus_seed << '\n'
     << "length = " << cfg.corpus.length << '\n'
     << "eta_noise = " << detail::fmt_double(cfg.corpus.eta_noise) << '\n'
     << "target_noise = " << detail::fmt_double(cfg.corpus.target_noise) << '\n'
     << "min_segment = " << cfg.corpus.min_segment << '\n'
     << "teacher_hidden = " << cfg.corpus.teacher_hidden << '\n'
     << "teacher_scale = " << detail::fmt_double(cfg.corpus.teacher_scale) << '\n';
  if (!cfg.corpus_dir.empty()) os << "corpus_dir = " << cfg.corpus_dir << '\n';
  os << "# controller\n"
     << "window = " << c.window << '\n'
     << "delta = " << detail::fmt_double(c.delta) << '\n'
     << "tau = " << detail::fmt_double(c.tau) << '\n'
     << "least_wait = " << c.least_wait << '\n'
     << "batch_size = " << c.batch_size << '\n'
     << "initial_batches = " << c.initial_batches << '\n'
     << "lambda = " << detail::fmt_double(c.lambda) << '\n'
     << "hidden_width = " << c.hidden_width << '\n'
     << "layer_seed = " << c.seed << '\n'
     << "activation = " << to_string(c.activation) << '\n'
     << "metric = " << to_string(c.metric) << '\n'
     << "reset_linear = " << b(c.reset_linear) << '\n'
     << "shared_layer = " << b(c.shared_layer) << '\n'
     << "standardize = " << b(c.standardize) << '\n'
     << "output_bias = " << b(c.output_bias) << '\n'
     << "# width selection\n"
     << "select_width = " << b(cfg.select_width) << '\n'
     << "width_grid = " << detail::join(cfg.width_grid, [](Index w) { return std::to_string(w); }) << '\n'
     << "cv_folds = " << cfg.cv_folds << '\n'
     << "cv_repeats = " << cfg.cv_repeats << '\n'
     << "# run\n"
     << "algorithms = " << detail::join(cfg.algorithms, [](Algorithm a) { return to_string(a); }) << '\n'
     << "sweep_deltas = " << detail::join(cfg.sweep_deltas, [](double d) { return detail::format_value(d); })
     << '\n'
     << "sweep_windows = " << detail::join(cfg.sweep_windows, [](Index w) { return std::to_string(w); })
     << '\n'
     << "write_records = " << b(cfg.write_records) << '\n';
}

inline ExperimentConfig read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  ExperimentConfig cfg;
  apply_config(cfg, KeyValues::parse(in));
  return cfg;
}

/// Stream specs for the configured corpus, ordered by id.
inline std::vector<StreamSpec> corpus_specs(const ExperimentConfig& cfg) {
  if (cfg.corpus_dir.empty()) return gen_corpus(cfg.n_abrupt, cfg.n_gradual, cfg.corpus_seed, cfg.corpus);
  const std::filesystem::path dir = std::filesystem::path(cfg.corpus_dir) / "specs";
  if (!std::filesystem::is_directory(dir)) throw ConfigError("corpus_dir has no specs/ directory: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (e.path().extension() == ".spec") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<StreamSpec> specs;
  for (const auto& f : files) {
    std::ifstream in(f);
    specs.push_back(read_stream_spec(in));
  }
  std::sort(specs.begin(), specs.end(), [](const StreamSpec& a, const StreamSpec& b) { return a.id < b.id; });
  if (specs.empty()) throw ConfigError("corpus_dir contains no stream specs");
  return specs;
}

namespace detail {

inline std::string stream_name(std::size_t id) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "stream_%04zu", id);
  return buf;
}

inline std::ofstream open_out(const std::filesystem::path& p) {
  std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  return out;
}

inline std::string join_indices(const std::vector<Index>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ';';
    out += std::to_string(v[i]);
  }
  return out;
}

inline void write_oracle_csv(std::ostream& os, const std::vector<Stream>& streams) {
  os << "stream_id,kind,segments,jumps\n";
  for (const auto& s : streams) {
    os << s.spec.id << ',' << to_string(s.spec.kind) << ',' << join_indices(s.profile.segments) << ','
       << join_indices(s.profile.jumps()) << '\n';
  }
}

}  // namespace detail

/// Writes specs/, streams/ (t, x1..x9, y, eta_true), oracle.csv and the
/// corpus config echo.
inline std::vector<StreamSpec> generate_corpus_files(const ExperimentConfig& cfg,
                                                     const std::filesystem::path& dir) {
  cfg.validate();
  const auto specs = corpus_specs(cfg);
  std::vector<Stream> streams(specs.size());
  parallel_for(specs.size(), cfg.jobs, [&](std::size_t i) { streams[i] = gen_stream(specs[i]); });
  for (std::size_t i = 0; i < specs.size(); ++i) {
    auto spec_out = detail::open_out(dir / "specs" / (detail::stream_name(specs[i].id) + ".spec"));
    write_stream_spec(spec_out, specs[i]);
    auto csv_out = detail::open_out(dir / "streams" / (detail::stream_name(specs[i].id) + ".csv"));
    write_stream_csv(csv_out, streams[i]);
  }
  auto oracle = detail::open_out(dir / "oracle.csv");
  detail::write_oracle_csv(oracle, streams);
  auto echo = detail::open_out(dir / "config.txt");
  write_config(echo, cfg);
  return specs;
}

struct StreamRun {
  StreamResult result;
  Index hidden_width = 0;
  std::vector<StepRecord> records;
};

struct ExperimentOutcome {
  std::vector<StreamRun> runs;  // stream-major, algorithms in config order
  RunSummary summary;
};

/// Runs every configured algorithm on one stream. All algorithms see the same
/// stream object.
inline std::vector<StreamRun> run_stream_algorithms(const ExperimentConfig& cfg, const Stream& s) {
  ControllerConfig c = cfg.controller;
  if (cfg.select_width) {
    const Index n0 = c.initial_samples();
    const Matrix X0 = c.standardize ? Standardizer(s.X.topRows(n0)).apply(s.X.topRows(n0)) : s.X.topRows(n0);
    WidthSearch ws;
    ws.candidates = cfg.width_grid;
    ws.folds = cfg.cv_folds;
    ws.repeats = cfg.cv_repeats;
    ws.seed = c.seed;
    ws.lambda = c.lambda;
    ws.activation = c.activation;
    ws.output_bias = c.output_bias;
    c.hidden_width = select_width(X0, s.Y.topRows(n0), ws);
  }
  std::vector<StreamRun> out;
  for (Algorithm a : cfg.algorithms) {
    StreamRun r;
    r.hidden_width = c.hidden_width;
    r.records = run_algorithm(a, s.X, s.Y, c);
    r.result.algorithm = to_string(a);
    r.result.stream_id = s.spec.id;
    r.result.kind = to_string(s.spec.kind);
    r.result.mean_mape = mean_mape(r.records);
    r.result.steps = r.records.size();
    r.result.reset_indices = reset_indices(r.records);
    out.push_back(std::move(r));
  }
  return out;
}

inline void write_per_stream_csv(std::ostream& os, const std::vector<StreamRun>& runs) {
  os << "stream_id,kind,algorithm,hidden_width,mape,steps,resets,reset_indices\n";
  for (const auto& r : runs) {
    os << r.result.stream_id << ',' << r.result.kind << ',' << r.result.algorithm << ',' << r.hidden_width << ','
       << detail::format_value(r.result.mean_mape) << ',' << r.result.steps << ','
       << r.result.reset_indices.size() << ',' << detail::join_indices(r.result.reset_indices) << '\n';
  }
}

inline std::vector<StreamResult> read_per_stream_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("stream_id,kind,algorithm", 0) != 0) {
    throw ConfigError("per_stream.csv: unexpected header");
  }
  std::vector<StreamResult> out;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (line.back() == ',') f.emplace_back();
    if (f.size() != 8) throw ConfigError("per_stream.csv line " + std::to_string(line_no) + ": expected 8 fields");
    StreamResult r;
    try {
      r.stream_id = static_cast<std::size_t>(std::stoull(f[0]));
      r.kind = f[1];
      r.algorithm = f[2];
      r.mean_mape = std::stod(f[4]);
      r.steps = static_cast<std::size_t>(std::stoull(f[5]));
      std::stringstream rs(f[7]);
      while (std::getline(rs, cell, ';')) {
        if (!cell.empty()) r.reset_indices.push_back(static_cast<Index>(std::stoll(cell)));
      }
    } catch (const std::logic_error&) {
      throw ConfigError("per_stream.csv line " + std::to_string(line_no) + ": malformed number");
    }
    out.push_back(std::move(r));
  }
  return out;
}

inline void write_summary_csv(std::ostream& os, const RunSummary& summary) {
  os << "algorithm,streams,mean_mape,sd_mape,total_resets\n";
  for (const auto& a : summary.algorithms) {
    os << a.algorithm << ',' << a.streams << ',' << detail::format_value(a.mean) << ','
       << detail::format_value(a.sd) << ',' << a.total_resets << '\n';
  }
}

/// Human-readable table, one column per algorithm with mean and sd rows.
inline void print_summary_table(std::ostream& os, const RunSummary& summary) {
  os << std::left << std::setw(8) << "";
  for (const auto& a : summary.algorithms) os << std::right << std::setw(14) << a.algorithm;
  os << '\n' << std::left << std::setw(8) << "mean";
  os << std::fixed << std::setprecision(3);
  for (const auto& a : summary.algorithms) os << std::right << std::setw(14) << a.mean;
  os << '\n' << std::left << std::setw(8) << "sd";
  for (const auto& a : summary.algorithms) os << std::right << std::setw(14) << a.sd;
  os << '\n';
  os.unsetf(std::ios::floatfield);
  os << std::setprecision(6);
}

inline void write_manifest(std::ostream& os, const ExperimentConfig& cfg, const std::vector<StreamSpec>& specs) {
  os << "tool = altlearn " << kVersion << '\n'
     << "config_format = " << kExperimentFormat << '\n'
     << "stream_format = " << kStreamSpecFormat << '\n'
     << "streams = " << specs.size() << '\n'
     << "algorithms = " << detail::join(cfg.algorithms, [](Algorithm a) { return to_string(a); }) << '\n'
     << "# id kind profile_seed input_seed teacher_seed\n";
  for (const auto& s : specs) {
    os << "stream." << s.id << " = " << to_string(s.kind) << ' ' << s.profile_seed << ' ' << s.input_seed << ' '
       << s.teacher_seed << '\n';
  }
}

/// Full comparison run: per-stream record CSVs (optional), per_stream.csv,
/// summary.csv, oracle.csv, config.txt and manifest.txt under output_dir.
inline ExperimentOutcome run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto specs = corpus_specs(cfg);
  std::vector<std::vector<StreamRun>> per_stream(specs.size());
  std::vector<Stream> streams(specs.size());
  parallel_for(specs.size(), cfg.jobs, [&](std::size_t i) {
    streams[i] = gen_stream(specs[i]);
    per_stream[i] = run_stream_algorithms(cfg, streams[i]);
  });

  ExperimentOutcome outcome;
  for (auto& v : per_stream) {
    for (auto& r : v) outcome.runs.push_back(std::move(r));
  }
  std::vector<StreamResult> results;
  for (const auto& r : outcome.runs) results.push_back(r.result);
  outcome.summary = summarize(results);

  const std::filesystem::path out(cfg.output_dir);
  if (cfg.write_records) {
    for (const auto& r : outcome.runs) {
      auto os = detail::open_out(out / "records" / r.result.algorithm /
                                 (detail::stream_name(r.result.stream_id) + ".csv"));
      write_records_csv(os, r.records);
    }
  }
  {
    auto os = detail::open_out(out / "per_stream.csv");
    write_per_stream_csv(os, outcome.runs);
  }
  {
    auto os = detail::open_out(out / "summary.csv");
    write_summary_csv(os, outcome.summary);
  }
  {
    auto os = detail::open_out(out / "oracle.csv");
    detail::write_oracle_csv(os, streams);
  }
  {
    auto os = detail::open_out(out / "config.txt");
    write_config(os, cfg);
  }
  {
    auto os = detail::open_out(out / "manifest.txt");
    write_manifest(os, cfg, specs);
  }
  return outcome;
}

/// Sensitivity sweep of the alternating learners over sweep_deltas x
/// sweep_windows; writes sensitivity.csv (long format) and
/// sensitivity_summary.csv.
inline std::vector<SensitivityCell> run_sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto specs = corpus_specs(cfg);
  std::vector<Stream> streams(specs.size());
  parallel_for(specs.size(), cfg.jobs, [&](std::size_t i) { streams[i] = gen_stream(specs[i]); });
  auto cells = sensitivity_grid(cfg.sweep_deltas, cfg.sweep_windows, streams, cfg.controller, cfg.jobs);
  const std::filesystem::path out(cfg.output_dir);
  {
    auto os = detail::open_out(out / "sensitivity.csv");
    write_sensitivity_csv(os, cells);
  }
  {
    auto os = detail::open_out(out / "sensitivity_summary.csv");
    write_sensitivity_summary_csv(os, cells);
  }
  {
    auto os = detail::open_out(out / "config.txt");
    write_config(os, cfg);
  }
  {
    auto os = detail::open_out(out / "manifest.txt");
    write_manifest(os, cfg, specs);
  }
  return cells;
}

}  // namespace altlearn

#endif  // ALTLEARN_EXPERIMENT_HPP_
