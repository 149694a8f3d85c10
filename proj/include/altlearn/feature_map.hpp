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

#ifndef ALTLEARN_FEATURE_MAP_HPP_
#define ALTLEARN_FEATURE_MAP_HPP_

#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>

#include <nlohmann/json.hpp>

#include "altlearn/numerics.hpp"

namespace altlearn {

enum class Activation { sigmoid, tanh };

inline std::string to_string(Activation a) { return a == Activation::sigmoid ? "sigmoid" : "tanh"; }

inline Activation parse_activation(const std::string& s) {
  if (s == "sigmoid") return Activation::sigmoid;
  if (s == "tanh") return Activation::tanh;
  throw std::invalid_argument("unknown activation '" + s + "'");
}

inline double activate(Activation a, double z) {
  return a == Activation::sigmoid ? 1.0 / (1.0 + std::exp(-z)) : std::tanh(z);
}

/// Fixed random input-to-hidden mapping. Immutable once built; a seeded
/// layer is a deterministic function of (input_dim, width, seed, activation).
///
/// With output_bias set, learners append a constant column to the hidden
/// outputs so the output layer carries an intercept (see design_matrix).
class HiddenLayer {
 public:
  HiddenLayer(Index input_dim, Index width, std::uint64_t seed,
              Activation activation = Activation::sigmoid, bool output_bias = true)
      : weights_(width, input_dim),
        biases_(width),
        activation_(activation),
        output_bias_(output_bias),
        seed_(seed) {
    if (input_dim < 1 || width < 1) {
      throw std::invalid_argument("HiddenLayer: input_dim and width must be >= 1");
    }
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (Index i = 0; i < width; ++i) {
      for (Index j = 0; j < input_dim; ++j) weights_(i, j) = unit(gen);
    }
    for (Index i = 0; i < width; ++i) biases_(i) = unit(gen);
  }

  // Explicit parameters; weights are width x input_dim.
  HiddenLayer(Matrix weights, Vector biases, Activation activation, bool output_bias = true)
      : weights_(std::move(weights)),
        biases_(std::move(biases)),
        activation_(activation),
        output_bias_(output_bias) {
    if (weights_.rows() < 1 || weights_.cols() < 1 || biases_.size() != weights_.rows()) {
      throw DimensionMismatch("HiddenLayer: weights/biases shape mismatch");
    }
  }

  Index input_dim() const { return weights_.cols(); }
  Index width() const { return weights_.rows(); }
  Activation activation() const { return activation_; }
  bool output_bias() const { return output_bias_; }
  // Columns of design_matrix: width plus one when output_bias is set.
  Index design_width() const { return width() + (output_bias_ ? 1 : 0); }
  const Matrix& weights() const { return weights_; }
  const Vector& biases() const { return biases_; }
  std::optional<std::uint64_t> seed() const { return seed_; }

  friend bool operator==(const HiddenLayer& a, const HiddenLayer& b) {
    return a.activation_ == b.activation_ && a.output_bias_ == b.output_bias_ &&
           a.weights_.rows() == b.weights_.rows() &&
           a.weights_.cols() == b.weights_.cols() && a.weights_ == b.weights_ &&
           a.biases_ == b.biases_;
  }

 private:
  Matrix weights_;
  Vector biases_;
  Activation activation_;
  bool output_bias_ = true;
  std::optional<std::uint64_t> seed_;
};

using LayerPtr = std::shared_ptr<const HiddenLayer>;

inline LayerPtr init_hidden(Index input_dim, Index width, std::uint64_t seed,
                            Activation activation = Activation::sigmoid, bool output_bias = true) {
  return std::make_shared<const HiddenLayer>(input_dim, width, seed, activation, output_bias);
}

/// Row n, column i holds G(w_i . x_n + b_i). Evaluated as a plain loop so the
/// result does not depend on how a matrix product happens to be blocked.
inline Matrix map_features(const HiddenLayer& layer, const Matrix& X) {
  if (X.cols() != layer.input_dim()) {
    throw DimensionMismatch("map_features: input has " + std::to_string(X.cols()) +
                            " columns, layer expects " + std::to_string(layer.input_dim()));
  }
  const Matrix& w = layer.weights();
  const Vector& b = layer.biases();
  Matrix H(X.rows(), layer.width());
  for (Index n = 0; n < X.rows(); ++n) {
    for (Index i = 0; i < layer.width(); ++i) {
      double z = 0.0;
      for (Index j = 0; j < X.cols(); ++j) z += w(i, j) * X(n, j);
      H(n, i) = activate(layer.activation(), z + b(i));
    }
  }
  return H;
}

/// Hidden outputs followed by a column of ones when the layer has an output
/// bias. This is the design the output weights are solved against.
inline Matrix design_matrix(const HiddenLayer& layer, const Matrix& X) {
  Matrix H = map_features(layer, X);
  if (!layer.output_bias()) return H;
  Matrix D(H.rows(), H.cols() + 1);
  D.leftCols(H.cols()) = H;
  D.col(H.cols()).setOnes();
  return D;
}

inline nlohmann::json layer_to_json(const HiddenLayer& layer) {
  nlohmann::json j{{"format", "altlearn.hidden_layer"},
                   {"version", 1},
                   {"input_dim", layer.input_dim()},
                   {"width", layer.width()},
                   {"activation", to_string(layer.activation())},
                   {"output_bias", layer.output_bias()}};
  if (layer.seed()) {
    j["seed"] = *layer.seed();
  } else {
    // No seed to re-derive from; keep the parameters.
    std::vector<double> w(layer.weights().data(), layer.weights().data() + layer.weights().size());
    std::vector<double> b(layer.biases().data(), layer.biases().data() + layer.biases().size());
    j["weights"] = w;
    j["biases"] = b;
  }
  return j;
}

inline HiddenLayer layer_from_json(const nlohmann::json& j) {
  if (j.at("format") != "altlearn.hidden_layer" || j.at("version") != 1) {
    throw std::invalid_argument("layer snapshot: unsupported format or version");
  }
  const Index d = j.at("input_dim").get<Index>();
  const Index k = j.at("width").get<Index>();
  const Activation act = parse_activation(j.at("activation").get<std::string>());
  const bool bias = j.at("output_bias").get<bool>();
  if (j.contains("seed")) return HiddenLayer(d, k, j.at("seed").get<std::uint64_t>(), act, bias);
  const auto w = j.at("weights").get<std::vector<double>>();
  const auto b = j.at("biases").get<std::vector<double>>();
  if (static_cast<Index>(w.size()) != d * k || static_cast<Index>(b.size()) != k) {
    throw std::invalid_argument("layer snapshot: parameter count mismatch");
  }
  return HiddenLayer(Eigen::Map<const Matrix>(w.data(), k, d), Eigen::Map<const Vector>(b.data(), k),
                     act, bias);
}

/// Per-column z-score with statistics frozen at construction. Zero-variance
/// columns keep unit scale.
class Standardizer {
 public:
  Standardizer() = default;

  explicit Standardizer(const Matrix& X) : mean_(X.colwise().mean()), scale_(X.cols()) {
    if (X.rows() < 1) throw std::invalid_argument("Standardizer: no samples");
    for (Index j = 0; j < X.cols(); ++j) {
      const double var = (X.col(j).array() - mean_(j)).square().sum() / static_cast<double>(X.rows());
      const double sd = std::sqrt(var);
      scale_(j) = sd > 1e-12 ? sd : 1.0;
    }
  }

  static Standardizer identity(Index dim) {
    Standardizer s;
    s.mean_ = Eigen::RowVectorXd::Zero(dim);
    s.scale_ = Eigen::RowVectorXd::Ones(dim);
    return s;
  }

  Matrix apply(const Matrix& X) const {
    if (X.cols() != mean_.size()) throw DimensionMismatch("Standardizer: column count mismatch");
    return ((X.rowwise() - mean_).array().rowwise() / scale_.array()).matrix();
  }

  const Eigen::RowVectorXd& mean() const { return mean_; }
  const Eigen::RowVectorXd& scale() const { return scale_; }

 private:
  Eigen::RowVectorXd mean_;
  Eigen::RowVectorXd scale_;
};

}  // namespace altlearn

#endif  // ALTLEARN_FEATURE_MAP_HPP_
