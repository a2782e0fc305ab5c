// Copyright 2026 The nysopt Authors. All Rights Reserved.
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

#pragma once

// Small dense linear algebra for the m x m and k x k problems of the Nystrom
// pipeline. Everything here works on matrices whose sides are at most a few
// hundred; sparsity lives only in the data layer.

#include <cstddef>
#include <span>

#include <Eigen/Core>

namespace nysopt {

using DenseMatrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline std::span<const double> as_span(const Vector& v) { return {v.data(), std::size_t(v.size())}; }
inline std::span<double> as_span(Vector& v) { return {v.data(), std::size_t(v.size())}; }

inline std::span<const double> column(const DenseMatrix& a, Eigen::Index j) {
  return {a.col(j).data(), std::size_t(a.rows())};
}
inline std::span<double> column(DenseMatrix& a, Eigen::Index j) {
  return {a.col(j).data(), std::size_t(a.rows())};
}

// Truncated eigendecomposition of a symmetric positive semidefinite matrix.
// vectors is m x k with orthonormal columns, values are descending and all
// strictly above the clamp threshold.
struct EigenPair {
  DenseMatrix vectors;
  Vector values;

  Eigen::Index rank() const { return values.size(); }
  Eigen::Index dim() const { return vectors.rows(); }
};

// Relative asymmetry accepted by sym_eig_truncated.
inline constexpr double kSymmetryTolerance = 1e-10;

// Keeps at most k_max eigenpairs with eigenvalue > clamp * max(lambda_max, 1).
// The input is symmetrized as (M + M^T) / 2 first. Throws NumericalError on
// non-finite entries or asymmetry beyond kSymmetryTolerance (relative to the
// largest entry), ConfigError on an empty or non-square input.
EigenPair sym_eig_truncated(const DenseMatrix& m, Eigen::Index k_max, double clamp);

// U diag(1/values) U^T; the m x m zero matrix for an empty pair.
DenseMatrix pinv_from_eig(const EigenPair& e);

// Cholesky solve. Throws SingularMatrixError on a nonpositive pivot.
Vector spd_solve(const DenseMatrix& a, const Vector& b);
DenseMatrix spd_solve(const DenseMatrix& a, const DenseMatrix& b);

double frobenius_norm(const DenseMatrix& a);

// Largest absolute eigenvalue; `a` must be symmetric.
double spectral_norm_sym(const DenseMatrix& a);

bool all_finite(const DenseMatrix& a);

}  // namespace nysopt
