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

#ifndef ALTLEARN_OSELM_HPP_
#define ALTLEARN_OSELM_HPP_

#include <memory>
#include <stdexcept>
#include <utility>

#include <nlohmann/json.hpp>

#include "altlearn/elm.hpp"
#include "altlearn/feature_map.hpp"
#include "altlearn/recursive_lsq.hpp"

namespace altlearn {

/// Online sequential ELM. Holds O(K^2 + K k) state regardless of how many
/// samples it has absorbed.
struct OselmState {
  LayerPtr layer;
  RecursiveLsq core;

  const Matrix& beta() const { return core.beta; }
  const Matrix& inverse_gram() const { return core.R; }
  Index absorbed() const { return core.absorbed; }
};

inline OselmState oselm_init(LayerPtr layer, const Matrix& X0, const Matrix& Y0,
                             double lambda = kDefaultRidge) {
  if (!layer) throw std::invalid_argument("oselm_init: null layer");
  if (X0.rows() != Y0.rows()) throw DimensionMismatch("oselm_init: X and Y row counts differ");
  const Matrix H0 = design_matrix(*layer, X0);
  return OselmState{std::move(layer), rls_init(H0, Y0, lambda)};
}

inline OselmState oselm_update(OselmState state, const Matrix& Xb, const Matrix& Yb) {
  if (Xb.rows() != Yb.rows()) throw DimensionMismatch("oselm_update: X and Y row counts differ");
  if (Xb.rows() == 0) return state;
  state.core = rls_update(std::move(state.core), design_matrix(*state.layer, Xb), Yb);
  return state;
}

/// Re-seeds the long-memory learner from the short window. Same closed form
/// as oselm_init; later updates continue recursively from here.
inline OselmState warm_restart(LayerPtr layer, const Matrix& Xw, const Matrix& Yw,
                               double lambda = kDefaultRidge) {
  if (Xw.rows() < 1) throw InsufficientData("warm_restart: empty window");
  return oselm_init(std::move(layer), Xw, Yw, lambda);
}

inline Matrix predict(const OselmState& state, const Matrix& X) {
  return predict_from_features(design_matrix(*state.layer, X), state.core.beta);
}

inline nlohmann::json to_json(const OselmState& s) {
  return {{"format", "altlearn.oselm"},
          {"version", 1},
          {"layer", layer_to_json(*s.layer)},
          {"state", to_json(s.core)}};
}

inline OselmState oselm_from_json(const nlohmann::json& j) {
  if (j.at("format") != "altlearn.oselm" || j.at("version") != 1) {
    throw std::invalid_argument("oselm snapshot: unsupported format or version");
  }
  return OselmState{std::make_shared<const HiddenLayer>(layer_from_json(j.at("layer"))),
                    rls_from_json(j.at("state"))};
}

}  // namespace altlearn

#endif  // ALTLEARN_OSELM_HPP_
