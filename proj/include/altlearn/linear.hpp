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

#ifndef ALTLEARN_LINEAR_HPP_
#define ALTLEARN_LINEAR_HPP_

#include <stdexcept>

#include <nlohmann/json.hpp>

#include "altlearn/recursive_lsq.hpp"

namespace altlearn {

/// Ridge linear regression on [1, x], updated recursively. Weights are
/// (d + 1) x k with the intercept in row 0.
struct LinearModel {
  RecursiveLsq core;

  const Matrix& weights() const { return core.beta; }
  Index absorbed() const { return core.absorbed; }
  Index input_dim() const { return core.beta.rows() - 1; }
};

inline Matrix augment(const Matrix& X) {
  Matrix A(X.rows(), X.cols() + 1);
  A.col(0).setOnes();
  A.rightCols(X.cols()) = X;
  return A;
}

inline LinearModel linear_fit(const Matrix& X, const Matrix& Y, double lambda = kDefaultRidge) {
  if (X.rows() != Y.rows()) throw DimensionMismatch("linear_fit: X and Y row counts differ");
  return LinearModel{rls_init(augment(X), Y, lambda)};
}

inline LinearModel linear_update(LinearModel model, const Matrix& Xb, const Matrix& Yb) {
  if (Xb.rows() != Yb.rows()) throw DimensionMismatch("linear_update: X and Y row counts differ");
  if (Xb.rows() == 0) return model;
  if (Xb.cols() != model.input_dim()) throw DimensionMismatch("linear_update: input width mismatch");
  model.core = rls_update(std::move(model.core), augment(Xb), Yb);
  return model;
}

inline Matrix linear_predict(const LinearModel& model, const Matrix& X) {
  if (X.cols() != model.input_dim()) throw DimensionMismatch("linear_predict: input width mismatch");
  const Matrix& w = model.core.beta;
  Matrix out(X.rows(), w.cols());
  for (Index n = 0; n < X.rows(); ++n) {
    for (Index c = 0; c < w.cols(); ++c) {
      double s = w(0, c);
      for (Index j = 0; j < X.cols(); ++j) s += X(n, j) * w(j + 1, c);
      out(n, c) = s;
    }
  }
  return out;
}

inline nlohmann::json to_json(const LinearModel& m) {
  return {{"format", "altlearn.linear"}, {"version", 1}, {"state", to_json(m.core)}};
}

inline LinearModel linear_from_json(const nlohmann::json& j) {
  if (j.at("format") != "altlearn.linear" || j.at("version") != 1) {
    throw std::invalid_argument("linear snapshot: unsupported format or version");
  }
  return LinearModel{rls_from_json(j.at("state"))};
}

}  // namespace altlearn

#endif  // ALTLEARN_LINEAR_HPP_
