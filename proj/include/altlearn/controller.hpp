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

#ifndef ALTLEARN_CONTROLLER_HPP_
#define ALTLEARN_CONTROLLER_HPP_

// Alternating-learners controller: a long-memory pair (online ELM L1, linear
// L2) gated by an overfit test, a short-memory ELM S refit on the last W
// samples, and a bit queue recording when S beats an unacceptable L. A high
// enough fraction of ones shrinks the long window to the short one and
// warm-restarts the long learners from it.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <deque>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "altlearn/elm.hpp"
#include "altlearn/feature_map.hpp"
#include "altlearn/linear.hpp"
#include "altlearn/metrics.hpp"
#include "altlearn/numerics.hpp"
#include "altlearn/oselm.hpp"

namespace altlearn {

enum class Selector { L1, L2 };

inline const char* to_string(Selector s) { return s == Selector::L1 ? "L1" : "L2"; }

/// alternating: register 1 only when L misses tau and S is no worse, reset
/// once the queue is longer than least_wait and its mean exceeds delta.
/// paired: register 1 when S beats L, reset when the count of ones exceeds
/// delta * window; no tau, no least_wait, no overfit guard.
enum class Variant { alternating, paired };

inline std::string to_string(Variant v) { return v == Variant::alternating ? "alternating" : "paired"; }

struct ControllerConfig {
  Index window = 20;          // W: short window and queue capacity
  double delta = 0.4;         // reset threshold on the fraction of ones
  double tau = 1.0;           // acceptable per-batch error (percent for MAPE)
  Index least_wait = 5;       // n0
  Index batch_size = 1;       // b
  Index initial_batches = 100;  // B0
  double lambda = kDefaultRidge;
  Index hidden_width = 30;    // K
  std::uint64_t seed = 7;     // hidden layer seed
  Activation activation = Activation::sigmoid;
  ErrorMetric metric = ErrorMetric::mape;
  Variant variant = Variant::alternating;
  bool reset_linear = true;   // reset L2 together with L1
  bool shared_layer = true;   // L and S use one hidden layer
  bool standardize = true;    // z-score inputs with initial-set statistics
  bool output_bias = true;    // intercept column in the ELM design

  Index initial_samples() const { return initial_batches * batch_size; }

  void validate() const {
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("config: delta must be in (0, 1)");
    if (!(tau > 0.0)) throw std::invalid_argument("config: tau must be > 0");
    if (window < 1) throw std::invalid_argument("config: window must be >= 1");
    if (least_wait < 1 || least_wait > window) {
      throw std::invalid_argument("config: least_wait must be in [1, window]");
    }
    if (batch_size < 1) throw std::invalid_argument("config: batch_size must be >= 1");
    if (initial_batches < 1) throw std::invalid_argument("config: initial_batches must be >= 1");
    if (hidden_width < 1) throw std::invalid_argument("config: hidden_width must be >= 1");
    if (!(lambda >= 0.0)) throw std::invalid_argument("config: lambda must be >= 0");
  }
};

/// Bounded FIFO of comparison bits; appending past capacity drops the oldest.
class PerfQueue {
 public:
  explicit PerfQueue(Index capacity = 1) : capacity_(capacity) {
    if (capacity < 1) throw std::invalid_argument("PerfQueue: capacity must be >= 1");
  }

  void push(bool bit) {
    bits_.push_back(bit ? 1 : 0);
    ones_ += bit ? 1 : 0;
    if (static_cast<Index>(bits_.size()) > capacity_) {
      ones_ -= bits_.front();
      bits_.pop_front();
    }
  }

  void clear() {
    bits_.clear();
    ones_ = 0;
  }

  Index size() const { return static_cast<Index>(bits_.size()); }
  Index ones() const { return ones_; }
  Index capacity() const { return capacity_; }
  bool empty() const { return bits_.empty(); }
  double fraction() const { return bits_.empty() ? 0.0 : static_cast<double>(ones_) / static_cast<double>(bits_.size()); }
  const std::deque<std::uint8_t>& bits() const { return bits_; }

 private:
  Index capacity_;
  std::deque<std::uint8_t> bits_;
  Index ones_ = 0;
};

/// 0 when L is acceptable or strictly better than S, else 1.
inline bool register_bit(double err_long, double err_short, double tau) {
  return !(err_long < tau || err_long < err_short);
}

inline bool paired_bit(double err_long, double err_short) { return err_short < err_long; }

inline bool comparison_bit(const ControllerConfig& cfg, double err_long, double err_short) {
  return cfg.variant == Variant::alternating ? register_bit(err_long, err_short, cfg.tau)
                                             : paired_bit(err_long, err_short);
}

inline bool alternating_condition(const PerfQueue& q, const ControllerConfig& cfg) {
  if (cfg.variant == Variant::paired) {
    return static_cast<double>(q.ones()) > cfg.delta * static_cast<double>(cfg.window);
  }
  return q.size() > cfg.least_wait &&
         static_cast<double>(q.ones()) / static_cast<double>(q.size()) > cfg.delta;
}

/// Most recent `capacity` samples (already standardized).
class SampleWindow {
 public:
  SampleWindow() = default;
  explicit SampleWindow(Index capacity) : capacity_(capacity) {}

  void push(const Matrix& Xb, const Matrix& Yb) {
    if (X_.size() == 0) {
      X_.resize(0, Xb.cols());
      Y_.resize(0, Yb.cols());
    }
    const Index total = X_.rows() + Xb.rows();
    const Index keep = std::min(total, capacity_);
    Matrix X(keep, Xb.cols());
    Matrix Y(keep, Yb.cols());
    Matrix allX(total, Xb.cols());
    Matrix allY(total, Yb.cols());
    allX << X_, Xb;
    allY << Y_, Yb;
    X = allX.bottomRows(keep);
    Y = allY.bottomRows(keep);
    X_ = std::move(X);
    Y_ = std::move(Y);
  }

  const Matrix& X() const { return X_; }
  const Matrix& Y() const { return Y_; }
  Index size() const { return X_.rows(); }
  Index capacity() const { return capacity_; }

 private:
  Index capacity_ = 1;
  Matrix X_;
  Matrix Y_;
};

struct ControllerState {
  Standardizer scaler;
  LayerPtr long_layer;
  LayerPtr short_layer;
  OselmState l1;
  LinearModel l2;
  ElmModel s;
  SampleWindow window;
  PerfQueue queue;
  Index t0 = 0;  // first sample index of the long window
  Index t = 0;   // samples consumed so far
  Selector selector = Selector::L1;
  std::vector<Index> reset_log;       // sample index of the batch that triggered each reset
  std::vector<std::string> breakdowns;  // causes of forced resets
};

struct StepRecord {
  Index index = 0;  // first sample index of the batch
  Matrix y_true;
  Matrix y_pred;    // emitted prediction
  double err_long = 0.0;
  double err_short = std::numeric_limits<double>::quiet_NaN();
  bool q_bit = false;
  bool reset = false;
  Selector selector = Selector::L1;
};

/// Outputs of the test half of a step; computed without labels.
struct Prediction {
  Matrix y_long;
  Matrix y_short;
  Selector selector = Selector::L1;
};

inline Selector overfit_guard(const ControllerState& state, const ControllerConfig& cfg) {
  return (state.t - state.t0) >= 2 * cfg.hidden_width ? Selector::L1 : Selector::L2;
}

inline ControllerState init_phase(const ControllerConfig& cfg, const Matrix& X0, const Matrix& Y0) {
  cfg.validate();
  if (X0.rows() < 1) throw InsufficientData("init_phase: empty initial dataset");
  if (X0.rows() != Y0.rows()) throw DimensionMismatch("init_phase: X and Y row counts differ");

  ControllerState st;
  st.scaler = cfg.standardize ? Standardizer(X0) : Standardizer::identity(X0.cols());
  const Matrix Xs = st.scaler.apply(X0);
  st.long_layer = init_hidden(X0.cols(), cfg.hidden_width, cfg.seed, cfg.activation, cfg.output_bias);
  st.short_layer = cfg.shared_layer
                       ? st.long_layer
                       : init_hidden(X0.cols(), cfg.hidden_width, cfg.seed ^ 0x9e3779b97f4a7c15ULL,
                                     cfg.activation, cfg.output_bias);
  st.l1 = oselm_init(st.long_layer, Xs, Y0, cfg.lambda);
  st.l2 = linear_fit(Xs, Y0, cfg.lambda);
  st.window = SampleWindow(cfg.window);
  st.window.push(Xs, Y0);
  st.s = train_batch(st.short_layer, st.window.X(), st.window.Y(), cfg.lambda);
  st.queue = PerfQueue(cfg.window);
  st.t0 = 0;
  st.t = X0.rows();
  st.selector = cfg.variant == Variant::paired ? Selector::L1 : overfit_guard(st, cfg);
  return st;
}

namespace detail {

inline void reset_long_memory(ControllerState& st, const ControllerConfig& cfg) {
  st.t0 = st.t - st.window.size();
  st.l1 = warm_restart(st.long_layer, st.window.X(), st.window.Y(), cfg.lambda);
  if (cfg.reset_linear) st.l2 = linear_fit(st.window.X(), st.window.Y(), cfg.lambda);
  st.queue.clear();
}

}  // namespace detail

/// Applies the alternating condition to the current queue. On a reset the
/// long window shrinks to the short window (T0 = T - W), both long learners
/// are refit on it, and the queue empties.
inline bool maybe_reset(ControllerState& st, const ControllerConfig& cfg) {
  if (!alternating_condition(st.queue, cfg)) return false;
  detail::reset_long_memory(st, cfg);
  return true;
}

/// Test half of a step: the emitted prediction depends only on state built
/// from earlier samples.
inline Prediction predict_batch(const ControllerState& st, const ControllerConfig& cfg, const Matrix& Xb) {
  const Matrix Xs = st.scaler.apply(Xb);
  Prediction p;
  p.selector = cfg.variant == Variant::paired ? Selector::L1 : overfit_guard(st, cfg);
  p.y_long = p.selector == Selector::L1 ? predict(st.l1, Xs) : linear_predict(st.l2, Xs);
  p.y_short = predict(st.s, Xs);
  return p;
}

/// Train half of a step: score the prediction, register the comparison bit,
/// slide the short window, reset or update the long learners, refit S.
inline StepRecord learn_batch(ControllerState& st, const ControllerConfig& cfg, const Matrix& Xb,
                              const Matrix& Yb, const Prediction& p) {
  if (Xb.rows() < 1) throw std::invalid_argument("step: empty batch");
  if (Xb.rows() != Yb.rows()) throw DimensionMismatch("step: batch X and Y row counts differ");

  StepRecord rec;
  rec.index = st.t;
  rec.y_true = Yb;
  rec.y_pred = p.y_long;
  rec.selector = p.selector;
  rec.err_long = batch_error(cfg.metric, p.y_long, Yb);
  rec.err_short = batch_error(cfg.metric, p.y_short, Yb);
  st.selector = p.selector;

  rec.q_bit = comparison_bit(cfg, rec.err_long, rec.err_short);
  st.queue.push(rec.q_bit);

  const Matrix Xs = st.scaler.apply(Xb);
  st.t += Xb.rows();
  st.window.push(Xs, Yb);

  rec.reset = maybe_reset(st, cfg);
  if (!rec.reset) {
    try {
      st.l1 = oselm_update(std::move(st.l1), Xs, Yb);
      st.l2 = linear_update(std::move(st.l2), Xs, Yb);
    } catch (const NumericalBreakdown& e) {
      st.breakdowns.push_back("index " + std::to_string(rec.index) + ": " + e.what());
      detail::reset_long_memory(st, cfg);
      rec.reset = true;
    }
  }
  if (rec.reset) st.reset_log.push_back(rec.index);
  st.s = train_batch(st.short_layer, st.window.X(), st.window.Y(), cfg.lambda);
  return rec;
}

inline StepRecord step(ControllerState& st, const ControllerConfig& cfg, const Matrix& Xb, const Matrix& Yb) {
  const Prediction p = predict_batch(st, cfg, Xb);
  return learn_batch(st, cfg, Xb, Yb, p);
}

/// Initializes on the first B0 * b samples and steps through the remainder in
/// batches of b (the final batch may be shorter).
inline std::vector<StepRecord> run_stream(const ControllerConfig& cfg, const Matrix& X, const Matrix& Y,
                                          ControllerState* final_state = nullptr) {
  cfg.validate();
  if (X.rows() != Y.rows()) throw DimensionMismatch("run_stream: X and Y row counts differ");
  const Index n0 = cfg.initial_samples();
  if (X.rows() < n0) throw InsufficientData("run_stream: stream shorter than the initial dataset");
  ControllerState st = init_phase(cfg, X.topRows(n0), Y.topRows(n0));
  std::vector<StepRecord> records;
  for (Index start = n0; start < X.rows(); start += cfg.batch_size) {
    const Index len = std::min(cfg.batch_size, X.rows() - start);
    records.push_back(step(st, cfg, X.middleRows(start, len), Y.middleRows(start, len)));
  }
  if (final_state) *final_state = std::move(st);
  return records;
}

/// Decision half of the controller in isolation: feeds planted (errL, errS)
/// pairs through registration, the queue and the alternating condition.
struct Decision {
  bool bit = false;
  bool reset = false;
};

inline std::vector<Decision> replay_decisions(const ControllerConfig& cfg,
                                              const std::vector<std::pair<double, double>>& errors) {
  PerfQueue q(cfg.window);
  std::vector<Decision> out;
  out.reserve(errors.size());
  for (const auto& [el, es] : errors) {
    Decision d;
    d.bit = comparison_bit(cfg, el, es);
    q.push(d.bit);
    d.reset = alternating_condition(q, cfg);
    if (d.reset) q.clear();
    out.push_back(d);
  }
  return out;
}

namespace detail {

inline std::string format_value(double v) {
  if (std::isnan(v)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

inline std::string format_cell(const Matrix& m) {
  std::string out;
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index c = 0; c < m.cols(); ++c) {
      if (!out.empty()) out += ';';
      out += format_value(m(i, c));
    }
  }
  return out;
}

}  // namespace detail

/// Columns: index,y_true,y_pred,err_L,err_S,q_bit,reset,selector. Batches
/// with several values join them with ';'. A missing err_S is left empty.
inline void write_records_csv(std::ostream& os, const std::vector<StepRecord>& records) {
  os << "index,y_true,y_pred,err_L,err_S,q_bit,reset,selector\n";
  for (const auto& r : records) {
    os << r.index << ',' << detail::format_cell(r.y_true) << ',' << detail::format_cell(r.y_pred) << ','
       << detail::format_value(r.err_long) << ',' << detail::format_value(r.err_short) << ','
       << (r.q_bit ? 1 : 0) << ',' << (r.reset ? 1 : 0) << ',' << to_string(r.selector) << '\n';
  }
}

inline std::vector<Index> reset_indices(const std::vector<StepRecord>& records) {
  std::vector<Index> out;
  for (const auto& r : records) {
    if (r.reset) out.push_back(r.index);
  }
  return out;
}

/// Mean over batches of the emitted prediction's MAPE.
inline double mean_mape(const std::vector<StepRecord>& records) {
  if (records.empty()) throw std::invalid_argument("mean_mape: no records");
  double s = 0.0;
  for (const auto& r : records) s += mape(r.y_pred, r.y_true);
  return s / static_cast<double>(records.size());
}

}  // namespace altlearn

#endif  // ALTLEARN_CONTROLLER_HPP_
