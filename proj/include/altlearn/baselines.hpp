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

#ifndef ALTLEARN_BASELINES_HPP_
#define ALTLEARN_BASELINES_HPP_

// The four compared algorithms, each run prequentially over one stream with
// the same initial dataset, input scaling and hidden layer.

#include <stdexcept>
#include <string>
#include <vector>

#include "altlearn/controller.hpp"
#include "altlearn/elm.hpp"
#include "altlearn/oselm.hpp"

namespace altlearn {

enum class Algorithm { static_elm, oselm, paired, alternating };

inline std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::static_elm: return "static_elm";
    case Algorithm::oselm: return "oselm";
    case Algorithm::paired: return "paired";
    case Algorithm::alternating: return "alternating";
  }
  return "?";
}

inline Algorithm parse_algorithm(const std::string& s) {
  if (s == "static_elm") return Algorithm::static_elm;
  if (s == "oselm") return Algorithm::oselm;
  if (s == "paired") return Algorithm::paired;
  if (s == "alternating") return Algorithm::alternating;
  throw std::invalid_argument("unknown algorithm '" + s + "'");
}

inline const std::vector<Algorithm>& all_algorithms() {
  static const std::vector<Algorithm> all{Algorithm::static_elm, Algorithm::oselm, Algorithm::paired,
                                          Algorithm::alternating};
  return all;
}

namespace detail {

struct BaselineSetup {
  Standardizer scaler;
  LayerPtr layer;
  Index n_init = 0;
};

inline BaselineSetup baseline_setup(const ControllerConfig& cfg, const Matrix& X, const Matrix& Y) {
  cfg.validate();
  if (X.rows() != Y.rows()) throw DimensionMismatch("baseline: X and Y row counts differ");
  BaselineSetup b;
  b.n_init = cfg.initial_samples();
  if (X.rows() < b.n_init) throw InsufficientData("baseline: stream shorter than the initial dataset");
  b.scaler = cfg.standardize ? Standardizer(X.topRows(b.n_init)) : Standardizer::identity(X.cols());
  b.layer = init_hidden(X.cols(), cfg.hidden_width, cfg.seed, cfg.activation, cfg.output_bias);
  return b;
}

inline StepRecord single_model_record(Index index, const Matrix& y_true, Matrix y_pred,
                                      const ControllerConfig& cfg) {
  StepRecord r;
  r.index = index;
  r.err_long = batch_error(cfg.metric, y_pred, y_true);
  r.y_true = y_true;
  r.y_pred = std::move(y_pred);
  return r;
}

}  // namespace detail

/// Regularized batch ELM fit once on the initial dataset, never updated.
inline std::vector<StepRecord> run_static_elm(const Matrix& X, const Matrix& Y, const ControllerConfig& cfg) {
  const auto setup = detail::baseline_setup(cfg, X, Y);
  const ElmModel model =
      train_batch(setup.layer, setup.scaler.apply(X.topRows(setup.n_init)), Y.topRows(setup.n_init), cfg.lambda);
  std::vector<StepRecord> records;
  for (Index start = setup.n_init; start < X.rows(); start += cfg.batch_size) {
    const Index len = std::min(cfg.batch_size, X.rows() - start);
    records.push_back(detail::single_model_record(
        start, Y.middleRows(start, len), predict(model, setup.scaler.apply(X.middleRows(start, len))), cfg));
  }
  return records;
}

/// OSELM initialized on the initial dataset and updated after every batch,
/// never reset.
inline std::vector<StepRecord> run_plain_oselm(const Matrix& X, const Matrix& Y, const ControllerConfig& cfg) {
  const auto setup = detail::baseline_setup(cfg, X, Y);
  OselmState state =
      oselm_init(setup.layer, setup.scaler.apply(X.topRows(setup.n_init)), Y.topRows(setup.n_init), cfg.lambda);
  std::vector<StepRecord> records;
  for (Index start = setup.n_init; start < X.rows(); start += cfg.batch_size) {
    const Index len = std::min(cfg.batch_size, X.rows() - start);
    const Matrix Xs = setup.scaler.apply(X.middleRows(start, len));
    records.push_back(detail::single_model_record(start, Y.middleRows(start, len), predict(state, Xs), cfg));
    state = oselm_update(std::move(state), Xs, Y.middleRows(start, len));
  }
  return records;
}

/// Paired learner adapted to regression: the controller machinery with the
/// paired registration bit (S strictly better than L) and reset rule.
inline std::vector<StepRecord> run_paired_learner(const Matrix& X, const Matrix& Y, ControllerConfig cfg) {
  cfg.variant = Variant::paired;
  return run_stream(cfg, X, Y);
}

inline std::vector<StepRecord> run_alternating(const Matrix& X, const Matrix& Y, ControllerConfig cfg) {
  cfg.variant = Variant::alternating;
  return run_stream(cfg, X, Y);
}

inline std::vector<StepRecord> run_algorithm(Algorithm a, const Matrix& X, const Matrix& Y,
                                             const ControllerConfig& cfg) {
  switch (a) {
    case Algorithm::static_elm: return run_static_elm(X, Y, cfg);
    case Algorithm::oselm: return run_plain_oselm(X, Y, cfg);
    case Algorithm::paired: return run_paired_learner(X, Y, cfg);
    case Algorithm::alternating: return run_alternating(X, Y, cfg);
  }
  throw std::invalid_argument("run_algorithm: unknown algorithm");
}

}  // namespace altlearn

#endif  // ALTLEARN_BASELINES_HPP_
