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

#ifndef ALTLEARN_DRIFT_SIM_HPP_
#define ALTLEARN_DRIFT_SIM_HPP_

// Synthetic drifting regression streams. Inputs are nine stationary
// turbine-like signals; the target is eta_t * g(x_t) + noise, where g is a
// fixed random tanh network scaled into [50, 150] and eta_t is a hidden
// efficiency profile carrying the drift.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "altlearn/key_value.hpp"
#include "altlearn/numerics.hpp"

namespace altlearn {

enum class DriftKind { abrupt, gradual };

inline std::string to_string(DriftKind k) { return k == DriftKind::abrupt ? "abrupt" : "gradual"; }

inline DriftKind parse_drift_kind(const std::string& s) {
  if (s == "abrupt") return DriftKind::abrupt;
  if (s == "gradual") return DriftKind::gradual;
  throw std::invalid_argument("unknown drift kind '" + s + "'");
}

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

struct ProfileOptions {
  Index length = 2000;
  double noise_sigma = 0.005;
  // Shortest segment drawn; keeps every change after a 100-sample initial
  // phase and at least this far from the next one.
  Index min_segment = 200;
};

/// Efficiency trajectory. abrupt: 1.0 ramps to 0.9 over l1, jumps to 1.1,
/// ramps to 0.9 over l2, jumps to 1.1, holds for l3, then ramps to 0.95 at
/// the last sample. gradual: holds 1.1 for l1, ramps to 0.9 over l2, holds.
struct EfficiencyProfile {
  DriftKind kind = DriftKind::abrupt;
  std::vector<Index> segments;  // {l1, l2, l3} or {l1, l2}
  double noise_sigma = 0.0;
  std::vector<double> clean;  // before noise
  std::vector<double> eta;    // clean + i.i.d. Gaussian noise

  Index length() const { return static_cast<Index>(clean.size()); }

  /// First sample index after each sudden jump (abrupt only).
  std::vector<Index> jumps() const {
    if (kind != DriftKind::abrupt) return {};
    return {segments[0], segments[0] + segments[1]};
  }

  /// Indices where the clean trajectory hits a pattern endpoint.
  std::vector<Index> breakpoints() const {
    const Index n = length();
    if (kind == DriftKind::abrupt) {
      const Index l1 = segments[0], l2 = segments[1];
      return {0, l1 - 1, l1, l1 + l2 - 1, l1 + l2, n - 1};
    }
    const Index l1 = segments[0], l2 = segments[1];
    return {l1 - 1, l1 + l2 - 1, n - 1};
  }
};

namespace detail {

inline void ramp(std::vector<double>& eta, Index from, Index to, double start, double end) {
  // Linear from `start` at index `from` to `end` at index `to` (inclusive).
  if (to == from) {
    eta[static_cast<std::size_t>(from)] = end;
    return;
  }
  for (Index t = from; t <= to; ++t) {
    const double frac = static_cast<double>(t - from) / static_cast<double>(to - from);
    eta[static_cast<std::size_t>(t)] = start + (end - start) * frac;
  }
}

inline Index draw_between(std::mt19937_64& rng, Index lo, Index hi) {
  std::uniform_int_distribution<Index> dist(lo, hi);
  return dist(rng);
}

}  // namespace detail

/// Clean trajectory for explicit segment lengths.
inline std::vector<double> efficiency_trajectory(DriftKind kind, const std::vector<Index>& seg, Index n) {
  std::vector<double> eta(static_cast<std::size_t>(n), 0.0);
  if (kind == DriftKind::abrupt) {
    if (seg.size() != 3) throw std::invalid_argument("abrupt profile needs three segment lengths");
    const Index l1 = seg[0], l2 = seg[1], l3 = seg[2];
    if (l1 < 2 || l2 < 2 || l3 < 1 || l1 + l2 + l3 >= n) {
      throw std::invalid_argument("abrupt profile: need l1, l2 >= 2, l3 >= 1 and l1 + l2 + l3 < length");
    }
    detail::ramp(eta, 0, l1 - 1, 1.0, 0.9);
    detail::ramp(eta, l1, l1 + l2 - 1, 1.1, 0.9);
    for (Index t = l1 + l2; t < l1 + l2 + l3; ++t) eta[static_cast<std::size_t>(t)] = 1.1;
    detail::ramp(eta, l1 + l2 + l3 - 1, n - 1, 1.1, 0.95);
  } else {
    if (seg.size() != 2) throw std::invalid_argument("gradual profile needs two segment lengths");
    const Index l1 = seg[0], l2 = seg[1];
    if (l1 < 1 || l2 < 1 || l1 + l2 >= n) {
      throw std::invalid_argument("gradual profile: need l1, l2 >= 1 and l1 + l2 < length");
    }
    for (Index t = 0; t < l1; ++t) eta[static_cast<std::size_t>(t)] = 1.1;
    detail::ramp(eta, l1 - 1, l1 + l2 - 1, 1.1, 0.9);
    for (Index t = l1 + l2; t < n; ++t) eta[static_cast<std::size_t>(t)] = 0.9;
  }
  return eta;
}

inline EfficiencyProfile gen_profile(DriftKind kind, std::mt19937_64& rng, const ProfileOptions& opt = {}) {
  const Index n = opt.length;
  const Index m = std::max<Index>(opt.min_segment, 2);
  EfficiencyProfile p;
  p.kind = kind;
  p.noise_sigma = opt.noise_sigma;
  if (kind == DriftKind::abrupt) {
    if (3 * m > n - 1) throw std::invalid_argument("gen_profile: stream too short for min_segment");
    const Index l1 = detail::draw_between(rng, m, n - 1 - 2 * m);
    const Index l2 = detail::draw_between(rng, m, n - 1 - l1 - m);
    const Index l3 = detail::draw_between(rng, m, n - 1 - l1 - l2);
    p.segments = {l1, l2, l3};
  } else {
    if (2 * m > n - 1) throw std::invalid_argument("gen_profile: stream too short for min_segment");
    const Index l1 = detail::draw_between(rng, m, n - 1 - m);
    const Index l2 = detail::draw_between(rng, m, n - 1 - l1);
    p.segments = {l1, l2};
  }
  p.clean = efficiency_trajectory(kind, p.segments, n);
  p.eta = p.clean;
  if (opt.noise_sigma > 0.0) {
    std::normal_distribution<double> noise(0.0, opt.noise_sigma);
    for (double& e : p.eta) e += noise(rng);
  }
  return p;
}

struct SignalRange {
  const char* name;
  double lo;
  double hi;
};

inline constexpr Index kSignalCount = 9;

inline const std::array<SignalRange, kSignalCount>& signal_ranges() {
  static const std::array<SignalRange, kSignalCount> ranges{{
      {"compressor_inlet_temperature", -5.0, 40.0},  // degC
      {"compressor_inlet_humidity", 20.0, 100.0},    // %
      {"ambient_pressure", 0.95, 1.04},              // bar
      {"inlet_pressure_drop", 2.0, 6.0},             // inH2O
      {"exhaust_pressure_drop", 4.0, 14.0},          // inH2O
      {"inlet_guide_vane_angle", 57.0, 88.0},        // deg
      {"fuel_temperature", 25.0, 185.0},             // degC
      {"compressor_flow", 420.0, 640.0},             // kg/s
      {"firing_temperature", 1150.0, 1400.0},        // degC
  }};
  return ranges;
}

/// Fixed random tanh network on the nine signals, affinely mapped so that its
/// output over the whole input box lies in [50, 150]. The bound comes from
/// interval arithmetic on each hidden unit, so it holds for every input in
/// range, not just sampled ones. Inputs are rescaled to [-1, 1]; hidden
/// weights and biases are uniform on [-input_scale, input_scale], output
/// weights uniform on [-1, 1].
class TeacherFunction {
 public:
  static constexpr double kOutputLo = 50.0;
  static constexpr double kOutputHi = 150.0;

  explicit TeacherFunction(std::uint64_t seed, Index hidden = 6, double input_scale = 0.3)
      : in_w_(hidden, kSignalCount), in_b_(hidden), out_w_(hidden) {
    if (hidden < 1) throw std::invalid_argument("TeacherFunction: hidden must be >= 1");
    if (!(input_scale > 0.0)) throw std::invalid_argument("TeacherFunction: input_scale must be > 0");
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> w(-input_scale, input_scale);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (Index i = 0; i < hidden; ++i) {
      for (Index j = 0; j < kSignalCount; ++j) in_w_(i, j) = w(gen);
    }
    for (Index i = 0; i < hidden; ++i) in_b_(i) = w(gen);
    for (Index i = 0; i < hidden; ++i) out_w_(i) = u(gen);

    double lo = 0.0, hi = 0.0;
    for (Index i = 0; i < hidden; ++i) {
      const double reach = in_w_.row(i).cwiseAbs().sum();
      const double a = out_w_(i) * std::tanh(in_b_(i) - reach);
      const double b = out_w_(i) * std::tanh(in_b_(i) + reach);
      lo += std::min(a, b);
      hi += std::max(a, b);
    }
    raw_lo_ = lo;
    raw_hi_ = hi;
  }

  double operator()(const Eigen::Ref<const Eigen::RowVectorXd>& x) const {
    if (x.size() != kSignalCount) throw DimensionMismatch("TeacherFunction: expected 9 inputs");
    const auto& r = signal_ranges();
    double raw = 0.0;
    for (Index i = 0; i < in_w_.rows(); ++i) {
      double z = in_b_(i);
      for (Index j = 0; j < kSignalCount; ++j) {
        const auto& s = r[static_cast<std::size_t>(j)];
        const double u = 2.0 * (x(j) - s.lo) / (s.hi - s.lo) - 1.0;
        z += in_w_(i, j) * u;
      }
      raw += out_w_(i) * std::tanh(z);
    }
    return kOutputLo + (kOutputHi - kOutputLo) * (raw - raw_lo_) / (raw_hi_ - raw_lo_);
  }

  Vector evaluate(const Matrix& X) const {
    Vector out(X.rows());
    for (Index n = 0; n < X.rows(); ++n) out(n) = (*this)(X.row(n));
    return out;
  }

 private:
  Matrix in_w_;
  Vector in_b_;
  Vector out_w_;
  double raw_lo_ = 0.0;
  double raw_hi_ = 1.0;
};

struct StreamSpec {
  std::size_t id = 0;
  DriftKind kind = DriftKind::abrupt;
  Index length = 2000;
  std::uint64_t profile_seed = 1;
  std::uint64_t teacher_seed = 2;
  std::uint64_t input_seed = 3;
  double eta_noise = 0.005;    // sigma of the Gaussian noise on eta
  double target_noise = 0.005;  // sigma of target noise relative to mean |y|
  Index min_segment = 200;
  Index teacher_hidden = 6;
  double teacher_scale = 0.3;

  friend bool operator==(const StreamSpec&, const StreamSpec&) = default;
};

/// A generated stream plus its ground truth, which learners never see.
struct Stream {
  StreamSpec spec;
  Matrix X;  // length x 9
  Matrix Y;  // length x 1
  EfficiencyProfile profile;
  Vector clean_target;  // eta_t * g(x_t) without observation noise
};

/// Draws inputs uniformly over the signal box and forms y = eta * g(x) + e,
/// with e ~ N(0, (target_noise * mean|eta g|)^2).
inline Stream synthesize(const TeacherFunction& teacher, const std::vector<double>& eta, double target_noise,
                         std::uint64_t input_seed) {
  const auto n = static_cast<Index>(eta.size());
  if (n < 1) throw std::invalid_argument("synthesize: empty profile");
  std::mt19937_64 rng(input_seed);
  Stream s;
  s.X.resize(n, kSignalCount);
  const auto& ranges = signal_ranges();
  for (Index t = 0; t < n; ++t) {
    for (Index j = 0; j < kSignalCount; ++j) {
      const auto& r = ranges[static_cast<std::size_t>(j)];
      std::uniform_real_distribution<double> u(r.lo, r.hi);
      s.X(t, j) = u(rng);
    }
  }
  const Vector g = teacher.evaluate(s.X);
  s.clean_target.resize(n);
  for (Index t = 0; t < n; ++t) s.clean_target(t) = eta[static_cast<std::size_t>(t)] * g(t);
  s.Y = s.clean_target;
  if (target_noise > 0.0) {
    const double sigma = target_noise * s.clean_target.cwiseAbs().mean();
    std::normal_distribution<double> noise(0.0, sigma);
    for (Index t = 0; t < n; ++t) s.Y(t, 0) += noise(rng);
  }
  return s;
}

inline Stream gen_stream(const StreamSpec& spec) {
  std::mt19937_64 rng(spec.profile_seed);
  ProfileOptions opt;
  opt.length = spec.length;
  opt.noise_sigma = spec.eta_noise;
  opt.min_segment = spec.min_segment;
  EfficiencyProfile profile = gen_profile(spec.kind, rng, opt);
  const TeacherFunction teacher(spec.teacher_seed, spec.teacher_hidden, spec.teacher_scale);
  Stream s = synthesize(teacher, profile.eta, spec.target_noise, spec.input_seed);
  s.spec = spec;
  s.profile = std::move(profile);
  return s;
}

inline Stream gen_stream(StreamSpec spec, Index length) {
  spec.length = length;
  return gen_stream(spec);
}

struct CorpusOptions {
  Index length = 2000;
  double eta_noise = 0.005;
  double target_noise = 0.005;
  Index min_segment = 200;
  Index teacher_hidden = 6;
  double teacher_scale = 0.3;
};

/// Abrupt streams take ids [0, n_abrupt), gradual ones follow. Every stream
/// shares one teacher (one machine); profile and input seeds are per stream.
inline std::vector<StreamSpec> gen_corpus(std::size_t n_abrupt, std::size_t n_gradual, std::uint64_t base_seed,
                                          const CorpusOptions& opt = {}) {
  std::vector<StreamSpec> out;
  out.reserve(n_abrupt + n_gradual);
  const std::uint64_t teacher_seed = splitmix64(base_seed ^ 0x7465616368657221ULL);
  for (std::size_t i = 0; i < n_abrupt + n_gradual; ++i) {
    StreamSpec s;
    s.id = i;
    s.kind = i < n_abrupt ? DriftKind::abrupt : DriftKind::gradual;
    s.length = opt.length;
    s.profile_seed = splitmix64(base_seed + 2 * i + 1);
    s.input_seed = splitmix64(base_seed + 2 * i + 2) ^ 0x5bd1e995ULL;
    s.teacher_seed = teacher_seed;
    s.eta_noise = opt.eta_noise;
    s.target_noise = opt.target_noise;
    s.min_segment = opt.min_segment;
    s.teacher_hidden = opt.teacher_hidden;
    s.teacher_scale = opt.teacher_scale;
    out.push_back(s);
  }
  return out;
}

inline constexpr const char* kStreamSpecFormat = "altlearn-stream/1";

inline void write_stream_spec(std::ostream& os, const StreamSpec& s) {
  char buf[64];
  os << "format = " << kStreamSpecFormat << '\n'
     << "id = " << s.id << '\n'
     << "kind = " << to_string(s.kind) << '\n'
     << "length = " << s.length << '\n'
     << "profile_seed = " << s.profile_seed << '\n'
     << "teacher_seed = " << s.teacher_seed << '\n'
     << "input_seed = " << s.input_seed << '\n';
  std::snprintf(buf, sizeof buf, "%.17g", s.eta_noise);
  os << "eta_noise = " << buf << '\n';
  std::snprintf(buf, sizeof buf, "%.17g", s.target_noise);
  os << "target_noise = " << buf << '\n'
     << "min_segment = " << s.min_segment << '\n'
     << "teacher_hidden = " << s.teacher_hidden << '\n';
  std::snprintf(buf, sizeof buf, "%.17g", s.teacher_scale);
  os << "teacher_scale = " << buf << '\n';
}

inline StreamSpec read_stream_spec(std::istream& in) {
  const KeyValues kv = KeyValues::parse(in);
  if (kv.get_string("format") != kStreamSpecFormat) {
    throw ConfigError("stream spec: unsupported format '" + kv.get_string("format") + "'");
  }
  StreamSpec s;
  s.id = static_cast<std::size_t>(kv.get_u64("id"));
  s.kind = parse_drift_kind(kv.get_string("kind"));
  s.length = static_cast<Index>(kv.get_int("length"));
  s.profile_seed = kv.get_u64("profile_seed");
  s.teacher_seed = kv.get_u64("teacher_seed");
  s.input_seed = kv.get_u64("input_seed");
  s.eta_noise = kv.get_double("eta_noise");
  s.target_noise = kv.get_double("target_noise");
  s.min_segment = static_cast<Index>(kv.get_int("min_segment"));
  s.teacher_hidden = static_cast<Index>(kv.get_int("teacher_hidden"));
  s.teacher_scale = kv.get_double("teacher_scale");
  return s;
}

/// Columns: t,x1..x9,y,eta_true.
inline void write_stream_csv(std::ostream& os, const Stream& s) {
  os << "t";
  for (Index j = 1; j <= kSignalCount; ++j) os << ",x" << j;
  os << ",y,eta_true\n";
  char buf[32];
  for (Index t = 0; t < s.X.rows(); ++t) {
    os << t;
    for (Index j = 0; j < s.X.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.10g", s.X(t, j));
      os << ',' << buf;
    }
    std::snprintf(buf, sizeof buf, "%.10g", s.Y(t, 0));
    os << ',' << buf;
    std::snprintf(buf, sizeof buf, "%.10g", s.profile.eta[static_cast<std::size_t>(t)]);
    os << ',' << buf << '\n';
  }
}

}  // namespace altlearn

#endif  // ALTLEARN_DRIFT_SIM_HPP_
