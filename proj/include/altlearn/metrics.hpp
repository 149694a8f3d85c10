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

#ifndef ALTLEARN_METRICS_HPP_
#define ALTLEARN_METRICS_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "altlearn/numerics.hpp"

namespace altlearn {

inline constexpr double kTargetGuard = 1e-8;

class NearZeroTarget : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

enum class ErrorMetric { mape, mse };

inline std::string to_string(ErrorMetric m) { return m == ErrorMetric::mape ? "mape" : "mse"; }

inline ErrorMetric parse_metric(const std::string& s) {
  if (s == "mape") return ErrorMetric::mape;
  if (s == "mse") return ErrorMetric::mse;
  throw std::invalid_argument("unknown error metric '" + s + "'");
}

/// Mean absolute percent error over every entry of a b x k batch, in percent.
/// Targets within `guard` of zero are rejected rather than clamped.
inline double mape(const Matrix& y_hat, const Matrix& y, double guard = kTargetGuard) {
  if (y_hat.rows() != y.rows() || y_hat.cols() != y.cols()) {
    throw DimensionMismatch("mape: prediction and target shapes differ");
  }
  if (y.size() == 0) throw std::invalid_argument("mape: empty batch");
  double total = 0.0;
  for (Index i = 0; i < y.rows(); ++i) {
    for (Index c = 0; c < y.cols(); ++c) {
      if (!(std::abs(y(i, c)) > guard)) {
        throw NearZeroTarget("mape: target magnitude at or below guard");
      }
      total += std::abs((y_hat(i, c) - y(i, c)) / y(i, c));
    }
  }
  return total / static_cast<double>(y.size()) * 100.0;
}

inline double mse(const Matrix& y_hat, const Matrix& y) {
  if (y_hat.rows() != y.rows() || y_hat.cols() != y.cols()) {
    throw DimensionMismatch("mse: prediction and target shapes differ");
  }
  if (y.size() == 0) throw std::invalid_argument("mse: empty batch");
  return (y_hat - y).squaredNorm() / static_cast<double>(y.size());
}

inline double batch_error(ErrorMetric metric, const Matrix& y_hat, const Matrix& y) {
  return metric == ErrorMetric::mape ? mape(y_hat, y) : mse(y_hat, y);
}

/// Five-number summary plus mean. Quantiles interpolate linearly between
/// order statistics (the R type-7 rule).
struct Distribution {
  std::size_t n = 0;
  double mean = 0.0;
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
};

namespace detail {

inline double sorted_quantile(const std::vector<double>& sorted, double p) {
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

// Summation over sorted values so results do not depend on input order.
inline double sorted_mean(const std::vector<double>& sorted) {
  double s = 0.0;
  for (double v : sorted) s += v;
  return s / static_cast<double>(sorted.size());
}

}  // namespace detail

inline Distribution describe(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("describe: no values");
  std::sort(values.begin(), values.end());
  Distribution d;
  d.n = values.size();
  d.mean = detail::sorted_mean(values);
  d.min = values.front();
  d.max = values.back();
  d.q1 = detail::sorted_quantile(values, 0.25);
  d.median = detail::sorted_quantile(values, 0.5);
  d.q3 = detail::sorted_quantile(values, 0.75);
  return d;
}

/// Sample standard deviation (n - 1 denominator); 0 for a single value.
inline double sample_sd(std::vector<double> values) {
  if (values.size() < 2) return 0.0;
  std::sort(values.begin(), values.end());
  const double m = detail::sorted_mean(values);
  std::vector<double> sq;
  sq.reserve(values.size());
  for (double v : values) sq.push_back((v - m) * (v - m));
  std::sort(sq.begin(), sq.end());
  double s = 0.0;
  for (double v : sq) s += v;
  return std::sqrt(s / static_cast<double>(values.size() - 1));
}

// One algorithm on one stream.
struct StreamResult {
  std::string algorithm;
  std::size_t stream_id = 0;
  std::string kind;
  double mean_mape = 0.0;
  std::size_t steps = 0;
  std::vector<Index> reset_indices;
};

struct AlgorithmSummary {
  std::string algorithm;
  std::size_t streams = 0;
  double mean = 0.0;
  double sd = 0.0;
  std::size_t total_resets = 0;
};

struct RunSummary {
  std::vector<AlgorithmSummary> algorithms;
};

/// Canonical reporting order: static batch ELM, plain OSELM, paired learner,
/// alternating learners, then anything else alphabetically.
inline int algorithm_rank(const std::string& name) {
  static const std::vector<std::string> order{"static_elm", "oselm", "paired", "alternating"};
  const auto it = std::find(order.begin(), order.end(), name);
  return it == order.end() ? static_cast<int>(order.size()) : static_cast<int>(it - order.begin());
}

/// Per-algorithm mean and sample sd of per-stream mean MAPE.
inline RunSummary summarize(const std::vector<StreamResult>& results) {
  if (results.empty()) throw std::invalid_argument("summarize: no results");
  std::map<std::string, std::vector<double>> values;
  std::map<std::string, std::size_t> resets;
  for (const auto& r : results) {
    values[r.algorithm].push_back(r.mean_mape);
    resets[r.algorithm] += r.reset_indices.size();
  }
  RunSummary out;
  for (auto& [name, v] : values) {
    AlgorithmSummary s;
    s.algorithm = name;
    s.streams = v.size();
    std::sort(v.begin(), v.end());
    s.mean = detail::sorted_mean(v);
    s.sd = sample_sd(v);
    s.total_resets = resets[name];
    out.algorithms.push_back(s);
  }
  std::stable_sort(out.algorithms.begin(), out.algorithms.end(),
                   [](const AlgorithmSummary& a, const AlgorithmSummary& b) {
                     const int ra = algorithm_rank(a.algorithm);
                     const int rb = algorithm_rank(b.algorithm);
                     return ra != rb ? ra < rb : a.algorithm < b.algorithm;
                   });
  return out;
}

}  // namespace altlearn

#endif  // ALTLEARN_METRICS_HPP_
