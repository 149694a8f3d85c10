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

#include "altlearn/oselm.hpp"

#include <gtest/gtest.h>

#include "altlearn/elm.hpp"
#include "oracles.hpp"

namespace altlearn {
namespace {

double max_diff(const Matrix& a, const Matrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

Matrix targets(const Matrix& X, std::uint64_t seed) {
  Matrix Y(X.rows(), 1);
  const Matrix w = oracle::random_normal(X.cols(), 1, seed);
  for (Index i = 0; i < X.rows(); ++i) Y(i, 0) = 100.0 + 5.0 * std::tanh((X.row(i) * w)(0, 0));
  return Y;
}

TEST(OselmInit, ExactlyDeterminedSystem) {
  const auto layer = init_hidden(3, 5, 1, Activation::sigmoid, false);
  const Matrix X = oracle::random_normal(5, 3, 2);
  const Matrix Y = oracle::random_normal(5, 1, 3);
  const OselmState s = oselm_init(layer, X, Y, 0.0);
  EXPECT_LT(max_diff(predict(s, X), Y), 1e-6);
  EXPECT_EQ(s.absorbed(), 5);
}

TEST(OselmInit, MatchesBatchTraining) {
  const auto layer = init_hidden(9, 30, 4);
  const Matrix X = oracle::random_normal(100, 9, 5);
  const Matrix Y = targets(X, 6);
  const OselmState s = oselm_init(layer, X, Y);
  EXPECT_LT(max_diff(s.beta(), train_batch(layer, X, Y).beta), 1e-10);
  EXPECT_LT(max_diff(s.inverse_gram(), oracle::direct_inverse_gram(design_matrix(*layer, X), kDefaultRidge)),
            1e-6 * s.inverse_gram().cwiseAbs().maxCoeff());
}

TEST(OselmInit, FewerSamplesThanUnits) {
  const auto layer = init_hidden(9, 30, 4);
  const Matrix X = oracle::random_normal(5, 9, 5);
  const OselmState s = oselm_init(layer, X, targets(X, 6));
  EXPECT_TRUE(oracle::cholesky_ok(s.inverse_gram()));
  EXPECT_THROW(oselm_init(layer, X, targets(X, 6), 0.0), SingularSystemError);
}

TEST(OselmUpdate, ZeroFeatureRowLeavesWeights) {
  // Zero biases and tanh units: the origin maps to an all-zero feature row.
  const auto layer = std::make_shared<const HiddenLayer>(oracle::random_normal(4, 2, 1), Vector::Zero(4),
                                                         Activation::tanh, false);
  const Matrix X = oracle::random_normal(20, 2, 2);
  const OselmState s = oselm_init(layer, X, targets(X, 3));
  const OselmState t = oselm_update(s, Matrix::Zero(1, 2), Matrix::Constant(1, 1, 1e6));
  EXPECT_TRUE(t.beta() == s.beta());
}

TEST(OselmUpdate, EmptyBatchIsNoOp) {
  const auto layer = init_hidden(2, 4, 1);
  const Matrix X = oracle::random_normal(10, 2, 2);
  const OselmState s = oselm_init(layer, X, targets(X, 3));
  const OselmState t = oselm_update(s, Matrix(0, 2), Matrix(0, 1));
  EXPECT_TRUE(t.beta() == s.beta());
  EXPECT_EQ(t.absorbed(), s.absorbed());
}

TEST(OselmUpdate, SequentialMatchesBatch) {
  const auto layer = init_hidden(9, 30, 7);
  const Matrix X = oracle::random_normal(80, 9, 8);
  const Matrix Y = targets(X, 9);
  OselmState s = oselm_init(layer, X.topRows(30), Y.topRows(30));
  for (Index i = 30; i < 80; ++i) s = oselm_update(s, X.middleRows(i, 1), Y.middleRows(i, 1));
  EXPECT_LT(max_diff(s.beta(), train_batch(layer, X, Y).beta), 1e-6);
  EXPECT_EQ(s.absorbed(), 80);
}

TEST(OselmUpdate, ChunkEqualsSingleRows) {
  const auto layer = init_hidden(9, 20, 10);
  const Matrix X = oracle::random_normal(45, 9, 11);
  const Matrix Y = targets(X, 12);
  const OselmState s0 = oselm_init(layer, X.topRows(40), Y.topRows(40));
  const OselmState chunk = oselm_update(s0, X.bottomRows(5), Y.bottomRows(5));
  OselmState rows = s0;
  for (Index i = 40; i < 45; ++i) rows = oselm_update(rows, X.middleRows(i, 1), Y.middleRows(i, 1));
  EXPECT_LT(max_diff(chunk.beta(), rows.beta()), 1e-7);
}

TEST(WarmRestart, DiscardsHistory) {
  const auto layer = init_hidden(3, 8, 13);
  const Matrix X = oracle::random_normal(60, 3, 14);
  const Matrix Y = targets(X, 15);
  const OselmState r = warm_restart(layer, X.bottomRows(20), Y.bottomRows(20));
  const OselmState fresh = oselm_init(layer, X.bottomRows(20), Y.bottomRows(20));
  EXPECT_TRUE(r.beta() == fresh.beta());
  EXPECT_EQ(r.absorbed(), 20);
  EXPECT_THROW(warm_restart(layer, Matrix(0, 3), Matrix(0, 1)), InsufficientData);
}

TEST(WarmRestart, ThenUpdatesMatchBatchOnWindowPlusNew) {
  const auto layer = init_hidden(3, 8, 16);
  const Matrix X = oracle::random_normal(50, 3, 17);
  const Matrix Y = targets(X, 18);
  OselmState s = warm_restart(layer, X.topRows(20), Y.topRows(20));
  for (Index i = 20; i < 50; ++i) s = oselm_update(s, X.middleRows(i, 1), Y.middleRows(i, 1));
  EXPECT_LT(max_diff(s.beta(), train_batch(layer, X, Y).beta), 1e-6);
}

// Property: any split of the stream into an initial block and arbitrary chunks
// lands on the batch solution.
TEST(OselmProperty, ChunkingDoesNotMatter) {
  std::mt19937_64 gen(99);
  for (int trial = 0; trial < 10; ++trial) {
    const Index k = 5 + static_cast<Index>(gen() % 20);
    const Index n = 60 + static_cast<Index>(gen() % 100);
    const auto layer = init_hidden(4, k, 400 + trial);
    const Matrix X = oracle::random_normal(n, 4, 500 + trial);
    const Matrix Y = targets(X, 600 + trial);
    Index at = k + 1 + static_cast<Index>(gen() % 10);
    OselmState s = oselm_init(layer, X.topRows(at), Y.topRows(at));
    while (at < n) {
      const Index b = std::min<Index>(n - at, 1 + static_cast<Index>(gen() % 7));
      s = oselm_update(s, X.middleRows(at, b), Y.middleRows(at, b));
      at += b;
    }
    const Matrix ref = train_batch(layer, X, Y).beta;
    EXPECT_LT(max_diff(predict(s, X), predict(ElmModel{layer, ref, n}, X)), 1e-6) << "trial " << trial;
  }
}

TEST(OselmSnapshot, RoundTripContinuesIdentically) {
  const auto layer = init_hidden(3, 6, 19);
  const Matrix X = oracle::random_normal(30, 3, 20);
  const Matrix Y = targets(X, 21);
  const OselmState s = oselm_init(layer, X.topRows(20), Y.topRows(20));
  const OselmState back = oselm_from_json(nlohmann::json::parse(to_json(s).dump()));
  const OselmState a = oselm_update(s, X.bottomRows(10), Y.bottomRows(10));
  const OselmState b = oselm_update(back, X.bottomRows(10), Y.bottomRows(10));
  EXPECT_TRUE(a.beta() == b.beta());
}

}  // namespace
}  // namespace altlearn
