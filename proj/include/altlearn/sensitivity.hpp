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

#ifndef ALTLEARN_SENSITIVITY_HPP_
#define ALTLEARN_SENSITIVITY_HPP_

#include <cstddef>
#include <ostream>
#include <vector>

#include "altlearn/controller.hpp"
#include "altlearn/drift_sim.hpp"
#include "altlearn/metrics.hpp"
#include "altlearn/parallel.hpp"

namespace altlearn {

struct SensitivityCell {
  double delta = 0.0;
  Index window = 0;
  std::vector<std::size_t> stream_ids;
  std::vector<double> mape;  // alternating-learner mean MAPE per stream
  Distribution distribution;
};

/// Alternating-learner MAPE distribution over the corpus for every
/// (delta, W) pair, delta-major. Cells are computed independently, so the
/// result does not depend on evaluation order or thread count.
inline std::vector<SensitivityCell> sensitivity_grid(const std::vector<double>& deltas,
                                                     const std::vector<Index>& windows,
                                                     const std::vector<Stream>& corpus,
                                                     const ControllerConfig& base, std::size_t jobs = 1) {
  if (deltas.empty() || windows.empty()) throw std::invalid_argument("sensitivity_grid: empty grid");
  if (corpus.empty()) throw std::invalid_argument("sensitivity_grid: empty corpus");
  std::vector<SensitivityCell> cells;
  for (double d : deltas) {
    for (Index w : windows) {
      SensitivityCell c;
      c.delta = d;
      c.window = w;
      c.mape.resize(corpus.size());
      for (const auto& s : corpus) c.stream_ids.push_back(s.spec.id);
      cells.push_back(std::move(c));
    }
  }
  const std::size_t total = cells.size() * corpus.size();
  parallel_for(total, jobs, [&](std::size_t k) {
    SensitivityCell& c = cells[k / corpus.size()];
    const Stream& s = corpus[k % corpus.size()];
    ControllerConfig cfg = base;
    cfg.variant = Variant::alternating;
    cfg.delta = c.delta;
    cfg.window = c.window;
    c.mape[k % corpus.size()] = mean_mape(run_stream(cfg, s.X, s.Y));
  });
  for (auto& c : cells) c.distribution = describe(c.mape);
  return cells;
}

/// Long format: one row per (delta, W, stream).
inline void write_sensitivity_csv(std::ostream& os, const std::vector<SensitivityCell>& cells) {
  os << "delta,W,stream_id,mape\n";
  for (const auto& c : cells) {
    for (std::size_t i = 0; i < c.mape.size(); ++i) {
      os << detail::format_value(c.delta) << ',' << c.window << ',' << c.stream_ids[i] << ','
         << detail::format_value(c.mape[i]) << '\n';
    }
  }
}

inline void write_sensitivity_summary_csv(std::ostream& os, const std::vector<SensitivityCell>& cells) {
  os << "delta,W,n,mean,min,q1,median,q3,max\n";
  for (const auto& c : cells) {
    const auto& d = c.distribution;
    os << detail::format_value(c.delta) << ',' << c.window << ',' << d.n << ',' << detail::format_value(d.mean)
       << ',' << detail::format_value(d.min) << ',' << detail::format_value(d.q1) << ','
       << detail::format_value(d.median) << ',' << detail::format_value(d.q3) << ','
       << detail::format_value(d.max) << '\n';
  }
}

}  // namespace altlearn

#endif  // ALTLEARN_SENSITIVITY_HPP_
