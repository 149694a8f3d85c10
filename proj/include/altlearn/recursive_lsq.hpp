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

#ifndef ALTLEARN_RECURSIVE_LSQ_HPP_
#define ALTLEARN_RECURSIVE_LSQ_HPP_

// Recursive ridge least squares over an arbitrary design, shared by the
// online ELM and the linear fallback learner.

#include <stdexcept>

#include <nlohmann/json.hpp>

#include "altlearn/elm.hpp"
#include "altlearn/numerics.hpp"

namespace altlearn {

// Updates between positive-definiteness checks of the inverse Gram.
inline constexpr Index kStabilizeInterval = 10000;

struct RecursiveLsq {
  Matrix beta;  // features x outputs
  Matrix R;     // inverse Gram, features x features
  Index absorbed = 0;
  Index updates_since_check = 0;
};

inline RecursiveLsq rls_init(const Matrix& H0, const Matrix& Y0, double lambda) {
  if (H0.rows() < 1) throw InsufficientData("rls_init: no samples");
  if (!(lambda > 0.0) && H0.rows() < H0.cols()) {
    throw SingularSystemError("rls_init: fewer samples than features requires lambda > 0");
  }
  RecursiveLsq s;
  s.beta = ridge_solve(H0, Y0, lambda);
  s.R = init_inverse_gram(H0, lambda);
  s.absorbed = H0.rows();
  return s;
}

/// beta += R' Hb^T (Yb - Hb beta), with R' the inverse Gram after folding in Hb.
inline RecursiveLsq rls_update(RecursiveLsq s, const Matrix& Hb, const Matrix& Yb) {
  if (Hb.rows() != Yb.rows()) throw DimensionMismatch("rls_update: batch rows differ");
  if (Hb.cols() != s.R.rows()) throw DimensionMismatch("rls_update: feature width mismatch");
  if (Yb.cols() != s.beta.cols()) throw DimensionMismatch("rls_update: output width mismatch");
  if (Hb.rows() == 0) return s;

  s.R = smw_update(s.R, Hb);
  const Matrix residual = Yb - Hb * s.beta;
  s.beta += s.R * (Hb.transpose() * residual);
  if (!s.beta.allFinite()) throw NumericalBreakdown("rls_update: non-finite output weights");
  s.absorbed += Hb.rows();

  if (++s.updates_since_check >= kStabilizeInterval) {
    s.updates_since_check = 0;
    detail::symmetrize(s.R);
    if (!is_positive_definite(s.R)) {
      throw NumericalBreakdown("rls_update: inverse Gram lost positive definiteness");
    }
  }
  return s;
}

inline nlohmann::json to_json(const RecursiveLsq& s) {
  return {{"beta", detail::matrix_to_json(s.beta)},
          {"R", detail::matrix_to_json(s.R)},
          {"absorbed", s.absorbed},
          {"updates_since_check", s.updates_since_check}};
}

inline RecursiveLsq rls_from_json(const nlohmann::json& j) {
  RecursiveLsq s;
  s.beta = detail::matrix_from_json(j.at("beta"));
  s.R = detail::matrix_from_json(j.at("R"));
  s.absorbed = j.at("absorbed").get<Index>();
  s.updates_since_check = j.at("updates_since_check").get<Index>();
  return s;
}

}  // namespace altlearn

#endif  // ALTLEARN_RECURSIVE_LSQ_HPP_
