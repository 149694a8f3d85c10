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

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "altlearn.hpp"
#include "oracles.hpp"

namespace {

using namespace altlearn;
namespace fs = std::filesystem;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double budget_s;  // 0: no runtime bound
  std::function<Outcome()> check;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path temp_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("altlearn_accept_" + name);
  fs::remove_all(p);
  return p;
}

Outcome oselm_batch_equivalence() {
  const Stream s = gen_stream(StreamSpec{}, 650);
  const Standardizer sc(s.X.topRows(30));
  const Matrix X = sc.apply(s.X.topRows(200));
  const Matrix Y = s.Y.topRows(200);
  const auto layer = init_hidden(9, 20, 7);
  OselmState st = oselm_init(layer, X.topRows(30), Y.topRows(30), 1e-6);
  for (Index i = 30; i < 200; ++i) st = oselm_update(std::move(st), X.middleRows(i, 1), Y.middleRows(i, 1));
  const double err = (st.beta() - train_batch(layer, X, Y, 1e-6).beta).cwiseAbs().maxCoeff();
  return {err <= 1e-6, "max |beta diff| = " + fmt("%.3g", err)};
}

Outcome smw_correctness() {
  const Index k = 30;
  const double lambda = 1e-2;
  Matrix H = oracle::random_normal(40, k, 1);
  Matrix R = init_inverse_gram(H, lambda);
  double worst = 0.0;
  for (int i = 0; i < 500; ++i) {
    const Matrix row = oracle::random_normal(1, k, 1000 + static_cast<std::uint64_t>(i));
    R = smw_update(R, row);
    H.conservativeResize(H.rows() + 1, Eigen::NoChange);
    H.bottomRows(1) = row;
    worst = std::max(worst, (R - oracle::direct_inverse_gram(H, lambda)).cwiseAbs().maxCoeff());
    if (max_asymmetry(R) > 1e-12 || !oracle::cholesky_ok(R)) {
      return {false, "lost symmetric positive definiteness at update " + std::to_string(i)};
    }
  }
  return {worst <= 1e-7, "max |R - direct| = " + fmt("%.3g", worst) + ", SPD at every step"};
}

Outcome trace_equivalence() {
  // Scripted phases: quiet, a drift burst, ties at tau, a leastWait-blocked
  // burst of five, a sparse pattern under delta, and a second burst.
  std::vector<std::pair<double, double>> errs;
  auto add = [&](int n, double el, double es) {
    for (int i = 0; i < n; ++i) errs.emplace_back(el, es);
  };
  add(30, 0.5, 2.0);
  add(12, 3.0, 1.0);
  add(10, 2.0, 2.0);
  add(8, 0.4, 0.1);
  add(5, 4.0, 1.0);
  add(20, 0.6, 0.2);
  for (int i = 0; i < 40; ++i) errs.emplace_back(i % 3 == 0 ? 2.5 : 0.8, 1.2);
  add(25, 5.0, 0.5);
  add(20, 1.5, 3.0);
  add(30, 0.9, 0.3);
  ControllerConfig cfg;
  const auto ref = oracle::reference_alternation(errs, cfg.tau, static_cast<int>(cfg.window),
                                                 static_cast<int>(cfg.least_wait), cfg.delta);
  const auto got = replay_decisions(cfg, errs);
  std::vector<int> resets;
  for (std::size_t i = 0; i < got.size(); ++i) {
    if ((got[i].bit ? 1 : 0) != ref.bits[i]) return {false, "bit mismatch at step " + std::to_string(i)};
    if (got[i].reset) resets.push_back(static_cast<int>(i));
  }
  if (resets != ref.resets) return {false, "reset indices differ"};
  return {errs.size() == 200 && !resets.empty(),
          std::to_string(errs.size()) + " steps, " + std::to_string(resets.size()) + " resets, identical"};
}

std::vector<Stream> corpus_streams(std::size_t n_abrupt, std::size_t n_gradual, std::uint64_t seed) {
  std::vector<Stream> out;
  for (const auto& spec : gen_corpus(n_abrupt, n_gradual, seed)) out.push_back(gen_stream(spec));
  return out;
}

Outcome reset_latency() {
  const ControllerConfig cfg;  // B0=100, b=1, W=20, delta=0.4, n0=5, tau=1%
  const auto streams = corpus_streams(20, 0, 4040);
  int caught = 0;
  for (const auto& s : streams) {
    const auto resets = reset_indices(run_alternating(s.X, s.Y, cfg));
    bool all = true;
    for (Index j : s.profile.jumps()) {
      all = all && std::any_of(resets.begin(), resets.end(),
                               [&](Index r) { return r >= j && r < j + 2 * cfg.window; });
    }
    caught += all ? 1 : 0;
  }
  const double frac = static_cast<double>(caught) / static_cast<double>(streams.size());
  return {frac >= 0.9, std::to_string(caught) + "/" + std::to_string(streams.size()) +
                           " streams caught every jump within 40 samples"};
}

// Shared by criteria 5 and 6.
const ExperimentOutcome& desk_run() {
  static const ExperimentOutcome outcome = [] {
    ExperimentConfig cfg;  // 20 abrupt + 20 gradual, 2000 samples
    cfg.output_dir = temp_dir("desk").string();
    cfg.write_records = false;
    auto o = run_experiment(cfg);
    fs::remove_all(cfg.output_dir);
    return o;
  }();
  return outcome;
}

Outcome table_ordering() {
  const auto& summary = desk_run().summary;
  auto mean_of = [&](const std::string& a) {
    for (const auto& s : summary.algorithms) {
      if (s.algorithm == a) return s.mean;
    }
    return std::numeric_limits<double>::quiet_NaN();
  };
  const double st = mean_of("static_elm"), os = mean_of("oselm"), pl = mean_of("paired"),
               al = mean_of("alternating");
  const bool pass = al < os && os < st && al <= pl + 0.1;
  return {pass, "static " + fmt("%.3f", st) + ", oselm " + fmt("%.3f", os) + ", paired " + fmt("%.3f", pl) +
                    ", alternating " + fmt("%.3f", al)};
}

Outcome overfit_guard_windows() {
  const ControllerConfig cfg;  // K=30, W=20
  int windows = 0;
  for (const auto& run : desk_run().runs) {
    if (run.result.algorithm != "alternating") continue;
    const auto& rec = run.records;
    for (std::size_t i = 0; i < rec.size(); ++i) {
      if (!rec[i].reset) continue;
      // Records after a reset: L2 for 2K - W = 40 samples, then L1, unless
      // another reset restarts the count.
      std::size_t j = i + 1;
      for (; j < rec.size() && j <= i + 40; ++j) {
        if (rec[j].selector != Selector::L2) {
          return {false, "stream " + std::to_string(run.result.stream_id) + ": L1 at " +
                             std::to_string(j - i) + " samples after reset"};
        }
        if (rec[j].reset) break;
      }
      if (j == i + 41 && j < rec.size()) {
        if (rec[j].selector != Selector::L1) {
          return {false, "stream " + std::to_string(run.result.stream_id) + ": still L2 after 40 samples"};
        }
        ++windows;
      }
    }
  }
  return {windows > 0, std::to_string(windows) + " complete post-reset windows, all exactly 40 L2 samples"};
}

Outcome sensitivity_sweep() {
  ExperimentConfig cfg;
  cfg.n_abrupt = 3;
  cfg.n_gradual = 3;
  cfg.output_dir = temp_dir("sweep").string();
  const auto cells = run_sweep(cfg);
  std::ifstream in(fs::path(cfg.output_dir) / "sensitivity.csv");
  std::string line;
  std::getline(in, line);
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  std::ifstream sin(fs::path(cfg.output_dir) / "sensitivity_summary.csv");
  int summary_rows = -1;
  while (std::getline(sin, line)) ++summary_rows;
  fs::remove_all(cfg.output_dir);
  const bool pass = cells.size() == 18 && rows >= 108 && summary_rows == 18;
  return {pass, std::to_string(cells.size()) + " cells, " + std::to_string(rows) + " long-format rows, " +
                    std::to_string(summary_rows) + " summary rows"};
}

Outcome determinism() {
  ExperimentConfig cfg;
  cfg.n_abrupt = 3;
  cfg.n_gradual = 3;
  const fs::path a = temp_dir("det_a"), b = temp_dir("det_b");
  cfg.output_dir = a.string();
  run_experiment(cfg);
  cfg.output_dir = b.string();
  run_experiment(cfg);
  int files = 0;
  for (const auto& e : fs::recursive_directory_iterator(a)) {
    if (!e.is_regular_file()) continue;
    const fs::path rel = fs::relative(e.path(), a);
    if (!fs::exists(b / rel) || slurp(e.path()) != slurp(b / rel)) {
      return {false, "differs: " + rel.string()};
    }
    ++files;
  }
  fs::remove_all(a);
  fs::remove_all(b);
  return {files > 0, std::to_string(files) + " files byte-identical"};
}

Outcome prequential_integrity() {
  const auto streams = corpus_streams(2, 2, 909);
  std::size_t compared = 0;
  for (const auto& s : streams) {
    for (Variant v : {Variant::alternating, Variant::paired}) {
      ControllerConfig cfg;
      cfg.variant = v;
      const auto normal = run_stream(cfg, s.X, s.Y);
      const Index n0 = cfg.initial_samples();
      ControllerState st = init_phase(cfg, s.X.topRows(n0), s.Y.topRows(n0));
      for (Index i = n0; i < s.X.rows(); ++i) {
        const Prediction p = predict_batch(st, cfg, s.X.middleRows(i, 1));  // labels withheld
        const Matrix label = s.Y.middleRows(i, 1);                           // released after prediction
        const StepRecord r = learn_batch(st, cfg, s.X.middleRows(i, 1), label, p);
        if (!(r.y_pred == normal[static_cast<std::size_t>(i - n0)].y_pred)) {
          return {false, "prediction differs at index " + std::to_string(i)};
        }
        ++compared;
      }
    }
  }
  return {compared > 0, std::to_string(compared) + " predictions identical"};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "OSELM-batch equivalence", 1.0, oselm_batch_equivalence},
      {2, "SMW inverse update correctness", 0.0, smw_correctness},
      {3, "alternation trace equivalence", 0.0, trace_equivalence},
      {4, "reset latency", 30.0, reset_latency},
      {5, "corpus ordering", 300.0, table_ordering},
      {6, "overfit guard", 0.0, overfit_guard_windows},
      {7, "sensitivity sweep", 600.0, sensitivity_sweep},
      {8, "determinism", 0.0, determinism},
      {9, "prequential integrity", 0.0, prequential_integrity},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.budget_s > 0.0 && secs > c.budget_s) {
      o.pass = false;
      o.detail += "; over runtime budget " + fmt("%.0f", c.budget_s) + " s";
    }
    std::printf("criterion %d %-32s %s  %s (%.2f s)\n", c.id, c.name, o.pass ? "PASS" : "FAIL", o.detail.c_str(),
                secs);
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
