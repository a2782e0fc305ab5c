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

#include "nysopt/linalg.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "nysopt/errors.hpp"

namespace nysopt {

bool all_finite(const DenseMatrix& a) { return a.allFinite(); }

double frobenius_norm(const DenseMatrix& a) { return a.norm(); }

double spectral_norm_sym(const DenseMatrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(0.5 * (a + a.transpose()),
                                                Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

EigenPair sym_eig_truncated(const DenseMatrix& m, Eigen::Index k_max, double clamp) {
  if (m.rows() == 0 || m.rows() != m.cols()) {
    throw ConfigError("sym_eig_truncated: expected a nonempty square matrix");
  }
  if (k_max < 0) throw ConfigError("sym_eig_truncated: k_max must be nonnegative");
  if (!(clamp >= 0.0)) throw ConfigError("sym_eig_truncated: clamp must be >= 0");
  if (!m.allFinite()) throw NumericalError("sym_eig_truncated: non-finite entries");

  const double scale = m.cwiseAbs().maxCoeff();
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > kSymmetryTolerance * scale) {
    throw NumericalError("sym_eig_truncated: matrix is not symmetric (max |M - M^T| = " +
                         std::to_string(asym) + ")");
  }

  const DenseMatrix sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(sym);
  if (es.info() != Eigen::Success) {
    throw NumericalError("sym_eig_truncated: eigendecomposition did not converge");
  }

  // Eigen returns ascending order.
  const Eigen::Index n = sym.rows();
  const double lambda_max = es.eigenvalues()(n - 1);
  const double threshold = clamp * std::max(lambda_max, 1.0);
  Eigen::Index keep = 0;
  while (keep < n && keep < k_max && es.eigenvalues()(n - 1 - keep) > threshold) ++keep;

  EigenPair out;
  out.vectors.resize(n, keep);
  out.values.resize(keep);
  for (Eigen::Index j = 0; j < keep; ++j) {
    out.values(j) = es.eigenvalues()(n - 1 - j);
    out.vectors.col(j) = es.eigenvectors().col(n - 1 - j);
  }
  return out;
}

DenseMatrix pinv_from_eig(const EigenPair& e) {
  const Eigen::Index n = e.dim();
  if (e.rank() == 0) return DenseMatrix::Zero(n, n);
  if ((e.values.array() <= 0.0).any()) {
    throw ConfigError("pinv_from_eig: eigenvalues must be positive");
  }
  const DenseMatrix scaled = e.vectors * e.values.cwiseInverse().asDiagonal();
  DenseMatrix p = scaled * e.vectors.transpose();
  return 0.5 * (p + p.transpose());
}

namespace {

Eigen::LLT<DenseMatrix> factor_spd(const DenseMatrix& a) {
  if (a.rows() != a.cols()) throw ConfigError("spd_solve: matrix must be square");
  if (!a.allFinite()) throw NumericalError("spd_solve: non-finite entries");
  Eigen::LLT<DenseMatrix> llt(a);
  if (llt.info() != Eigen::Success) {
    throw SingularMatrixError("spd_solve: matrix is not positive definite");
  }
  return llt;
}

}  // namespace

Vector spd_solve(const DenseMatrix& a, const Vector& b) {
  if (b.size() != a.rows()) throw ConfigError("spd_solve: dimension mismatch");
  return factor_spd(a).solve(b);
}

DenseMatrix spd_solve(const DenseMatrix& a, const DenseMatrix& b) {
  if (b.rows() != a.rows()) throw ConfigError("spd_solve: dimension mismatch");
  return factor_spd(a).solve(b);
}

}  // namespace nysopt
