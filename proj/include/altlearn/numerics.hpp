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

#ifndef ALTLEARN_NUMERICS_HPP_
#define ALTLEARN_NUMERICS_HPP_

// Dense solves shared by every learner. Rows of a design matrix are samples,
// columns are features; target rows align with design rows.

#include <stdexcept>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/QR>

namespace altlearn {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr double kDefaultRidge = 1e-6;

// Batches wider than this bypass the inner b x b factorization in
// smw_update and rebuild the inverse Gram through the K x K route.
inline constexpr Index kMaxInnerSolve = 64;

class SingularSystemError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NumericalBreakdown : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InsufficientData : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {

inline void require_finite(const Matrix& m, const char* what) {
  if (!m.allFinite()) {
    throw std::invalid_argument(std::string(what) + " contains non-finite entries");
  }
}

inline void symmetrize(Matrix& m) { m = (0.5 * (m + m.transpose())).eval(); }

}  // namespace detail

/// Minimizes |H beta - Y|^2 + lambda |beta|^2, i.e. (H'H + lambda I)^-1 H'Y.
///
/// With lambda == 0 the system is solved through a rank-revealing QR of H and
/// a rank-deficient H raises SingularSystemError; the caller has to
/// regularize.
inline Matrix ridge_solve(const Matrix& H, const Matrix& Y, double lambda) {
  if (H.rows() < 1 || H.cols() < 1) {
    throw std::invalid_argument("ridge_solve: empty design matrix");
  }
  if (Y.rows() != H.rows()) {
    throw DimensionMismatch("ridge_solve: target rows do not match design rows");
  }
  if (!(lambda >= 0.0)) {
    throw std::invalid_argument("ridge_solve: lambda must be >= 0");
  }
  detail::require_finite(H, "ridge_solve: design matrix");

  if (lambda == 0.0) {
    Eigen::ColPivHouseholderQR<Matrix> qr(H);
    if (qr.rank() < H.cols()) {
      throw SingularSystemError("ridge_solve: design matrix is rank deficient; use lambda > 0");
    }
    return qr.solve(Y);
  }

  Matrix gram = H.transpose() * H;
  gram.diagonal().array() += lambda;
  Eigen::LLT<Matrix> llt(gram);
  if (llt.info() != Eigen::Success) {
    throw SingularSystemError("ridge_solve: regularized Gram matrix is not positive definite");
  }
  return llt.solve(H.transpose() * Y);
}

/// Returns (H0'H0 + lambda I)^-1, symmetrized.
inline Matrix init_inverse_gram(const Matrix& H0, double lambda) {
  if (H0.rows() < 1 || H0.cols() < 1) {
    throw std::invalid_argument("init_inverse_gram: empty design matrix");
  }
  if (!(lambda >= 0.0)) {
    throw std::invalid_argument("init_inverse_gram: lambda must be >= 0");
  }
  detail::require_finite(H0, "init_inverse_gram: design matrix");
  const Index k = H0.cols();
  Matrix gram = H0.transpose() * H0;
  gram.diagonal().array() += lambda;
  Eigen::LLT<Matrix> llt(gram);
  if (llt.info() != Eigen::Success) {
    throw SingularSystemError("init_inverse_gram: Gram matrix is singular; use lambda > 0");
  }
  Matrix inv = llt.solve(Matrix::Identity(k, k));
  detail::symmetrize(inv);
  return inv;
}

/// Folds the rows of Hb into the inverse Gram R:
///   R - R Hb' (I + Hb R Hb')^-1 Hb R
/// The inner system is factored (never inverted) for b <= kMaxInnerSolve.
/// Throws NumericalBreakdown when the factorization fails; the caller is
/// expected to rebuild R from data it still holds.
inline Matrix smw_update(const Matrix& R, const Matrix& Hb) {
  if (R.rows() != R.cols()) {
    throw DimensionMismatch("smw_update: inverse Gram must be square");
  }
  if (Hb.cols() != R.rows()) {
    throw DimensionMismatch("smw_update: batch width does not match inverse Gram");
  }
  if (Hb.rows() == 0) {
    return R;
  }
  detail::require_finite(Hb, "smw_update: batch");

  Matrix out;
  if (Hb.rows() <= kMaxInnerSolve) {
    const Matrix rh = R * Hb.transpose();  // K x b
    Matrix inner = Hb * rh;                // b x b
    inner.diagonal().array() += 1.0;
    Eigen::LLT<Matrix> llt(inner);
    if (llt.info() != Eigen::Success) {
      throw NumericalBreakdown("smw_update: inner system is not positive definite");
    }
    out = R - rh * llt.solve(rh.transpose());
  } else {
    Eigen::LLT<Matrix> rllt(R);
    if (rllt.info() != Eigen::Success) {
      throw NumericalBreakdown("smw_update: inverse Gram lost positive definiteness");
    }
    Matrix gram = rllt.solve(Matrix::Identity(R.rows(), R.cols()));
    gram.noalias() += Hb.transpose() * Hb;
    Eigen::LLT<Matrix> gllt(gram);
    if (gllt.info() != Eigen::Success) {
      throw NumericalBreakdown("smw_update: rebuilt Gram matrix is not positive definite");
    }
    out = gllt.solve(Matrix::Identity(R.rows(), R.cols()));
  }
  if (!out.allFinite()) {
    throw NumericalBreakdown("smw_update: update produced non-finite entries");
  }
  detail::symmetrize(out);
  return out;
}

/// True when every Cholesky pivot of m is positive.
inline bool is_positive_definite(const Matrix& m) {
  if (m.rows() != m.cols() || !m.allFinite()) return false;
  Eigen::LLT<Matrix> llt(m);
  if (llt.info() != Eigen::Success) return false;
  return (llt.matrixLLT().diagonal().array() > 0.0).all();
}

inline double max_asymmetry(const Matrix& m) {
  return (m - m.transpose()).cwiseAbs().maxCoeff();
}

}  // namespace altlearn

#endif  // ALTLEARN_NUMERICS_HPP_
