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

#include "altlearn/controller.hpp"

#include <gtest/gtest.h>

#include <sstream>

#include "altlearn/drift_sim.hpp"
#include "oracles.hpp"

namespace altlearn {
namespace {

Stream stationary(std::uint64_t seed, Index n) {
  return synthesize(TeacherFunction(seed), std::vector<double>(static_cast<std::size_t>(n), 1.0), 0.005,
                    seed + 17);
}

// Efficiency steps from 1.0 to `after` at sample `at`.
Stream with_jump(std::uint64_t seed, Index n, Index at, double after) {
  std::vector<double> eta(static_cast<std::size_t>(n), 1.0);
  for (Index t = at; t < n; ++t) eta[static_cast<std::size_t>(t)] = after;
  return synthesize(TeacherFunction(seed), eta, 0.005, seed + 17);
}

TEST(InitPhase, PaperConfiguration) {
  ControllerConfig cfg;
  const Stream s = stationary(1, 100);
  const ControllerState st = init_phase(cfg, s.X, s.Y);
  EXPECT_EQ(st.t, 100);
  EXPECT_EQ(st.t0, 0);
  EXPECT_EQ(st.window.size(), 20);
  EXPECT_TRUE(st.window.X() == st.scaler.apply(s.X.bottomRows(20)));
  EXPECT_TRUE(st.window.Y() == s.Y.bottomRows(20));
  EXPECT_EQ(st.s.trained_on, 20);
  EXPECT_EQ(st.l1.absorbed(), 100);
  EXPECT_EQ(st.l2.absorbed(), 100);
  EXPECT_TRUE(st.queue.empty());
  EXPECT_EQ(st.selector, Selector::L1);
}

TEST(InitPhase, WindowSizedInitialSetAgreesWithShortLearner) {
  ControllerConfig cfg;
  cfg.initial_batches = cfg.window;
  const Stream s = stationary(2, cfg.window);
  const ControllerState st = init_phase(cfg, s.X, s.Y);
  const Matrix Xs = st.scaler.apply(s.X);
  EXPECT_LT((predict(st.l1, Xs) - predict(st.s, Xs)).cwiseAbs().maxCoeff(), 1e-6);
  EXPECT_EQ(st.selector, Selector::L2);
}

TEST(InitPhase, EmptyInitialSet) {
  EXPECT_THROW(init_phase(ControllerConfig{}, Matrix(0, 9), Matrix(0, 1)), InsufficientData);
}

TEST(OverfitGuard, Boundary) {
  ControllerConfig cfg;
  ControllerState st;
  st.t0 = 100;
  st.t = 120;
  EXPECT_EQ(overfit_guard(st, cfg), Selector::L2);
  st.t = 159;
  EXPECT_EQ(overfit_guard(st, cfg), Selector::L2);
  st.t = 160;
  EXPECT_EQ(overfit_guard(st, cfg), Selector::L1);
  st.t = 2100;
  EXPECT_EQ(overfit_guard(st, cfg), Selector::L1);
}

TEST(Register, Branches) {
  EXPECT_FALSE(register_bit(0.5, 2.0, 1.0));
  EXPECT_TRUE(register_bit(2.0, 1.0, 1.0));
  EXPECT_FALSE(register_bit(2.0, 3.0, 1.0));
  EXPECT_TRUE(register_bit(2.0, 2.0, 1.0));  // tie with L unacceptable
  EXPECT_FALSE(register_bit(0.9, 0.9, 1.0));
}

TEST(PerfQueue, BoundedFifo) {
  PerfQueue q(3);
  for (bool b : {true, false, true, true}) q.push(b);
  EXPECT_EQ(q.size(), 3);
  EXPECT_EQ(q.ones(), 2);
  EXPECT_EQ(q.bits().front(), 0);
  q.clear();
  EXPECT_EQ(q.size(), 0);
  EXPECT_EQ(q.ones(), 0);
}

ControllerState fresh_state(const ControllerConfig& cfg) {
  const Stream s = stationary(3, cfg.initial_samples() + 1);
  return init_phase(cfg, s.X.topRows(cfg.initial_samples()), s.Y.topRows(cfg.initial_samples()));
}

TEST(MaybeReset, FiresOnFullOnes) {
  ControllerConfig cfg;
  ControllerState st = fresh_state(cfg);
  for (int i = 0; i < 6; ++i) st.queue.push(true);
  ASSERT_TRUE(maybe_reset(st, cfg));
  EXPECT_EQ(st.t0, st.t - cfg.window);
  EXPECT_TRUE(st.queue.empty());
  const OselmState want = warm_restart(st.long_layer, st.window.X(), st.window.Y(), cfg.lambda);
  EXPECT_TRUE(st.l1.beta() == want.beta());
  EXPECT_TRUE(st.l2.weights() == linear_fit(st.window.X(), st.window.Y(), cfg.lambda).weights());
  EXPECT_EQ(overfit_guard(st, cfg), Selector::L2);
}

TEST(MaybeReset, LeastWaitBlocks) {
  ControllerConfig cfg;
  ControllerState st = fresh_state(cfg);
  for (int i = 0; i < 4; ++i) st.queue.push(true);
  const Matrix before = st.l1.beta();
  EXPECT_FALSE(maybe_reset(st, cfg));
  EXPECT_EQ(st.queue.size(), 4);
  EXPECT_TRUE(st.l1.beta() == before);
  EXPECT_EQ(st.t0, 0);
}

TEST(MaybeReset, BelowThreshold) {
  ControllerConfig cfg;
  ControllerState st = fresh_state(cfg);
  for (bool b : {true, false, false, false, false, true}) st.queue.push(b);
  EXPECT_FALSE(maybe_reset(st, cfg));
}

TEST(ReplayDecisions, MatchesReferenceImplementation) {
  ControllerConfig cfg;
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  std::vector<std::pair<double, double>> errs;
  for (int i = 0; i < 500; ++i) {
    const double burst = (i / 40) % 2 == 1 ? 1.5 : 0.0;
    errs.emplace_back(u(gen) + burst, u(gen));
  }
  const auto ref = oracle::reference_alternation(errs, cfg.tau, static_cast<int>(cfg.window),
                                                 static_cast<int>(cfg.least_wait), cfg.delta);
  const auto got = replay_decisions(cfg, errs);
  std::vector<int> resets;
  for (std::size_t i = 0; i < got.size(); ++i) {
    ASSERT_EQ(got[i].bit ? 1 : 0, ref.bits[i]) << "step " << i;
    if (got[i].reset) resets.push_back(static_cast<int>(i));
  }
  EXPECT_EQ(resets, ref.resets);
  EXPECT_FALSE(resets.empty());
}

// A smoother teacher than the corpus default keeps the long learner's error
// clear of tau; with errL hovering at tau, early queue noise can still fire.
TEST(Step, StationaryStreamsNeverReset) {
  ControllerConfig cfg;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Stream s = synthesize(TeacherFunction(100 + seed, 6, 0.15), std::vector<double>(600, 1.0), 0.005,
                                seed + 117);
    const auto records = run_stream(cfg, s.X, s.Y);
    ASSERT_EQ(records.size(), 500u);
    EXPECT_TRUE(reset_indices(records).empty()) << "seed " << seed;
    for (const auto& r : records) EXPECT_EQ(r.selector, Selector::L1);
  }
}

TEST(Step, AbruptJumpTriggersReset) {
  ControllerConfig cfg;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Index jump = 400;
    const Stream s = with_jump(200 + seed, 800, jump, 1.2);
    ControllerState st;
    const auto records = run_stream(cfg, s.X, s.Y, &st);
    const auto resets = reset_indices(records);
    const bool caught = std::any_of(resets.begin(), resets.end(),
                                    [&](Index r) { return r >= jump && r <= jump + 2 * cfg.window; });
    EXPECT_TRUE(caught) << "seed " << seed;
  }
}

// Drives the stream by hand and checks the state invariants after every step.
TEST(Step, StateInvariantsHold) {
  ControllerConfig cfg;
  const Stream s = with_jump(300, 900, 450, 0.8);
  const Index n0 = cfg.initial_samples();
  ControllerState st = init_phase(cfg, s.X.topRows(n0), s.Y.topRows(n0));
  Index resets = 0;
  for (Index i = n0; i < s.X.rows(); ++i) {
    const Index t0_before = st.t0;
    const Index t_before = st.t;
    const Selector expected = (st.t - st.t0) >= 2 * cfg.hidden_width ? Selector::L1 : Selector::L2;
    const StepRecord r = step(st, cfg, s.X.middleRows(i, 1), s.Y.middleRows(i, 1));
    EXPECT_EQ(r.selector, expected);
    EXPECT_EQ(st.t, t_before + 1);
    EXPECT_LE(st.queue.size(), cfg.window);
    EXPECT_LE(st.window.size(), cfg.window);
    EXPECT_LE(st.t0, st.t);
    if (r.reset) {
      ++resets;
      EXPECT_EQ(st.t0, st.t - cfg.window);
      EXPECT_EQ(st.queue.size(), 0);
    } else {
      EXPECT_EQ(st.t0, t0_before);
    }
  }
  EXPECT_GT(resets, 0);
  EXPECT_EQ(static_cast<Index>(st.reset_log.size()), resets);
}

TEST(Step, ShortLearnerRefitOnWindow) {
  ControllerConfig cfg;
  const Stream s = stationary(4, 130);
  ControllerState st;
  run_stream(cfg, s.X, s.Y, &st);
  const Matrix Xw = st.scaler.apply(s.X.bottomRows(20));
  EXPECT_TRUE(st.window.X() == Xw);
  EXPECT_TRUE(st.s.beta == train_batch(st.short_layer, Xw, s.Y.bottomRows(20), cfg.lambda).beta);
}

TEST(Step, RejectsEmptyBatch) {
  ControllerConfig cfg;
  ControllerState st = fresh_state(cfg);
  EXPECT_THROW(step(st, cfg, Matrix(0, 9), Matrix(0, 1)), std::invalid_argument);
}

TEST(RunStream, Deterministic) {
  ControllerConfig cfg;
  const Stream s = with_jump(5, 500, 300, 1.15);
  const auto a = run_stream(cfg, s.X, s.Y);
  const auto b = run_stream(cfg, s.X, s.Y);
  std::ostringstream oa, ob;
  write_records_csv(oa, a);
  write_records_csv(ob, b);
  EXPECT_EQ(oa.str(), ob.str());
}

TEST(RunStream, InitialOnlyStreamGivesNoRecords) {
  ControllerConfig cfg;
  const Stream s = stationary(6, 100);
  EXPECT_TRUE(run_stream(cfg, s.X, s.Y).empty());
  EXPECT_THROW(run_stream(cfg, s.X.topRows(99), s.Y.topRows(99)), InsufficientData);
}

TEST(RunStream, PaperConfigurationOnLongStream) {
  ControllerConfig cfg;
  const Stream s = gen_stream(StreamSpec{});
  const auto records = run_stream(cfg, s.X, s.Y);
  EXPECT_EQ(records.size(), 1900u);
  EXPECT_TRUE(std::isfinite(mean_mape(records)));
}

TEST(RunStream, BatchesLargerThanOne) {
  ControllerConfig cfg;
  cfg.batch_size = 4;
  cfg.initial_batches = 25;
  const Stream s = stationary(7, 203);
  const auto records = run_stream(cfg, s.X, s.Y);
  ASSERT_EQ(records.size(), 26u);
  EXPECT_EQ(records.back().y_true.rows(), 3);
  EXPECT_EQ(records[1].index, 104);
}

// Labels from a batch onward must not influence that batch's prediction.
TEST(Prequential, PredictionIgnoresCurrentAndFutureLabels) {
  ControllerConfig cfg;
  const Stream s = with_jump(8, 400, 250, 1.2);
  const auto base = run_stream(cfg, s.X, s.Y);
  for (Index cut : {100, 180, 250, 333}) {
    Matrix Y = s.Y;
    Y.bottomRows(Y.rows() - cut).array() *= 3.0;
    const auto perturbed = run_stream(cfg, s.X, Y);
    for (std::size_t i = 0; i < base.size(); ++i) {
      if (base[i].index > cut) break;
      ASSERT_TRUE(base[i].y_pred == perturbed[i].y_pred) << "cut " << cut << " index " << base[i].index;
    }
  }
}

TEST(Prequential, SplitApiMatchesStep) {
  ControllerConfig cfg;
  const Stream s = with_jump(9, 300, 200, 0.85);
  const auto reference = run_stream(cfg, s.X, s.Y);
  ControllerState st = init_phase(cfg, s.X.topRows(100), s.Y.topRows(100));
  for (Index i = 100; i < 300; ++i) {
    const Prediction p = predict_batch(st, cfg, s.X.middleRows(i, 1));  // label not yet supplied
    const StepRecord r = learn_batch(st, cfg, s.X.middleRows(i, 1), s.Y.middleRows(i, 1), p);
    ASSERT_TRUE(r.y_pred == reference[static_cast<std::size_t>(i - 100)].y_pred);
  }
}

TEST(RecordsCsv, Schema) {
  StepRecord r;
  r.index = 7;
  r.y_true = Matrix::Constant(1, 1, 100.0);
  r.y_pred = Matrix::Constant(1, 1, 99.5);
  r.err_long = 0.5;
  r.q_bit = true;
  std::ostringstream os;
  write_records_csv(os, {r});
  EXPECT_EQ(os.str(), "index,y_true,y_pred,err_L,err_S,q_bit,reset,selector\n7,100,99.5,0.5,,1,0,L1\n");
}

TEST(ControllerConfig, Validation) {
  ControllerConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.delta = 1.0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.least_wait = cfg.window + 1;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.tau = 0.0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

}  // namespace
}  // namespace altlearn
