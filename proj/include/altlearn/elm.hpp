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

#ifndef ALTLEARN_ELM_HPP_
#define ALTLEARN_ELM_HPP_

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "altlearn/feature_map.hpp"
#include "altlearn/metrics.hpp"
#include "altlearn/numerics.hpp"

namespace altlearn {

/// Batch-trained output weights over a fixed hidden layer.
struct ElmModel {
  LayerPtr layer;
  Matrix beta;  // design_width x outputs
  Index trained_on = 0;
};

inline ElmModel train_batch(LayerPtr layer, const Matrix& X, const Matrix& Y,
                            double lambda = kDefaultRidge) {
  if (!layer) throw std::invalid_argument("train_batch: null layer");
  if (X.rows() < 1) throw InsufficientData("train_batch: no samples");
  if (Y.rows() != X.rows()) throw DimensionMismatch("train_batch: X and Y row counts differ");
  Matrix beta = ridge_solve(design_matrix(*layer, X), Y, lambda);
  return ElmModel{std::move(layer), std::move(beta), X.rows()};
}

/// Computes H * beta, summing each output in hidden-unit order.
inline Matrix predict_from_features(const Matrix& H, const Matrix& beta) {
  if (H.cols() != beta.rows()) throw DimensionMismatch("predict: feature width mismatch");
  Matrix out(H.rows(), beta.cols());
  for (Index n = 0; n < H.rows(); ++n) {
    for (Index c = 0; c < beta.cols(); ++c) {
      double s = 0.0;
      for (Index i = 0; i < H.cols(); ++i) s += H(n, i) * beta(i, c);
      out(n, c) = s;
    }
  }
  return out;
}

inline Matrix predict(const ElmModel& model, const Matrix& X) {
  return predict_from_features(design_matrix(*model.layer, X), model.beta);
}

struct WidthSearch {
  std::vector<Index> candidates{10, 20, 30, 50, 80};
  Index folds = 5;
  Index repeats = 3;
  std::uint64_t seed = 0;
  double lambda = kDefaultRidge;
  Activation activation = Activation::sigmoid;
  bool output_bias = true;
};

/// Mean validation MAPE of each candidate width under repeated k-fold cross
/// validation. Folds are contiguous blocks in time order; each repeat draws a
/// fresh hidden layer.
inline std::vector<double> width_scores(const Matrix& X, const Matrix& Y, const WidthSearch& search) {
  if (search.candidates.empty()) throw std::invalid_argument("select_width: no candidate widths");
  if (search.folds < 2) throw std::invalid_argument("select_width: need at least 2 folds");
  if (search.repeats < 1) throw std::invalid_argument("select_width: need at least 1 repeat");
  if (Y.rows() != X.rows()) throw DimensionMismatch("select_width: X and Y row counts differ");
  const Index n = X.rows();
  if (n < search.folds) {
    throw InsufficientData("select_width: fewer samples than folds");
  }

  std::vector<double> scores;
  scores.reserve(search.candidates.size());
  for (const Index width : search.candidates) {
    double total = 0.0;
    Index count = 0;
    for (Index r = 0; r < search.repeats; ++r) {
      auto layer = init_hidden(X.cols(), width, search.seed + static_cast<std::uint64_t>(r),
                               search.activation, search.output_bias);
      for (Index f = 0; f < search.folds; ++f) {
        const Index lo = f * n / search.folds;
        const Index hi = (f + 1) * n / search.folds;
        const Index n_train = n - (hi - lo);
        Matrix Xt(n_train, X.cols());
        Matrix Yt(n_train, Y.cols());
        Xt << X.topRows(lo), X.bottomRows(n - hi);
        Yt << Y.topRows(lo), Y.bottomRows(n - hi);
        const ElmModel model = train_batch(layer, Xt, Yt, search.lambda);
        total += mape(predict(model, X.middleRows(lo, hi - lo)), Y.middleRows(lo, hi - lo));
        ++count;
      }
    }
    scores.push_back(total / static_cast<double>(count));
  }
  return scores;
}

/// Candidate width with the lowest cross-validated MAPE; ties go to the
/// smaller width.
inline Index select_width(const Matrix& X, const Matrix& Y, const WidthSearch& search) {
  const std::vector<double> scores = width_scores(X, Y, search);
  Index best = search.candidates.front();
  double best_score = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const Index w = search.candidates[i];
    if (scores[i] < best_score || (scores[i] == best_score && w < best)) {
      best = w;
      best_score = scores[i];
    }
  }
  return best;
}

namespace detail {

inline nlohmann::json matrix_to_json(const Matrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    std::vector<double> row(static_cast<std::size_t>(m.cols()));
    for (Index j = 0; j < m.cols(); ++j) row[static_cast<std::size_t>(j)] = m(i, j);
    rows.push_back(row);
  }
  return rows;
}

inline Matrix matrix_from_json(const nlohmann::json& j) {
  const auto rows = j.get<std::vector<std::vector<double>>>();
  if (rows.empty()) return Matrix();
  Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.front().size()) throw std::invalid_argument("ragged matrix in snapshot");
    for (std::size_t c = 0; c < rows[i].size(); ++c) {
      m(static_cast<Index>(i), static_cast<Index>(c)) = rows[i][c];
    }
  }
  return m;
}

}  // namespace detail

inline nlohmann::json to_json(const ElmModel& model) {
  return {{"format", "altlearn.elm"},
          {"version", 1},
          {"layer", layer_to_json(*model.layer)},
          {"beta", detail::matrix_to_json(model.beta)},
          {"trained_on", model.trained_on}};
}

inline ElmModel elm_from_json(const nlohmann::json& j) {
  if (j.at("format") != "altlearn.elm" || j.at("version") != 1) {
    throw std::invalid_argument("elm snapshot: unsupported format or version");
  }
  ElmModel m;
  m.layer = std::make_shared<const HiddenLayer>(layer_from_json(j.at("layer")));
  m.beta = detail::matrix_from_json(j.at("beta"));
  m.trained_on = j.at("trained_on").get<Index>();
  return m;
}

}  // namespace altlearn

#endif  // ALTLEARN_ELM_HPP_
