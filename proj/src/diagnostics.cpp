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

#include "nysopt/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "nysopt/errors.hpp"
#include "nysopt/nystrom.hpp"
#include "nysopt/rng.hpp"

namespace nysopt {
namespace {

double matrix_norm(const DenseMatrix& a, NormKind norm) {
  return norm == NormKind::fro ? frobenius_norm(a) : spectral_norm_sym(a);
}

void check_square_pair(const DenseMatrix& h, const DenseMatrix& n, const char* who) {
  if (h.rows() != h.cols() || n.rows() != h.rows() || n.cols() != h.cols()) {
    throw ConfigError(std::string(who) + ": shape mismatch");
  }
}

Vector sym_eigenvalues(const DenseMatrix& a) {
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(0.5 * (a + a.transpose()), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

// (A + lambda I)^{-1} through the eigendecomposition of the symmetric A.
DenseMatrix shifted_inverse(const DenseMatrix& a, double lambda) {
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(0.5 * (a + a.transpose()));
  const Vector inv = (es.eigenvalues().array() + lambda).inverse().matrix();
  return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace

double rel_error(const DenseMatrix& h, const DenseMatrix& n, NormKind norm) {
  check_square_pair(h, n, "rel_error");
  const double denom = matrix_norm(h, norm);
  if (denom == 0.0) throw NumericalError("rel_error: ||H|| = 0, relative error undefined");
  return matrix_norm(h - n, norm) / denom;
}

double effective_dimension(const DenseMatrix& h, double lambda) {
  if (!(lambda > 0.0)) throw ConfigError("effective_dimension: lambda must be > 0");
  if (h.rows() != h.cols()) throw ConfigError("effective_dimension: H must be square");
  const Vector s = sym_eigenvalues(h).cwiseMax(0.0);
  return (s.array() / (s.array() + lambda)).sum();
}

NewtonCloseness newton_closeness(const DenseMatrix& h, const DenseMatrix& n, double lambda) {
  check_square_pair(h, n, "newton_closeness");
  if (!(lambda > 0.0)) throw ConfigError("newton_closeness: lambda must be > 0");
  NewtonCloseness out;
  const DenseMatrix diff = shifted_inverse(n, lambda) - shifted_inverse(h, lambda);
  out.lhs = spectral_norm_sym(diff);
  const double j = spectral_norm_sym(h - n);
  out.rhs = j == 0.0 ? 0.0 : j / (lambda * (j + lambda));
  return out;
}

std::size_t numerical_rank(const DenseMatrix& a, double tol) {
  if (a.size() == 0) return 0;
  const Vector s = sym_eigenvalues(a);
  const double thr = tol * std::max(std::abs(s.maxCoeff()), 1.0);
  return static_cast<std::size_t>((s.array() > thr).count());
}

std::vector<ApproxQualityReport> quality_sweep(const LossModel& model, const Dataset& data,
                                               const Vector& w, std::span<const std::size_t> m_grid,
                                               double lambda, std::size_t seeds,
                                               std::uint64_t master_seed, std::size_t cap) {
  if (m_grid.empty()) throw ConfigError("quality_sweep: empty m grid");
  if (seeds == 0) throw ConfigError("quality_sweep: need at least one seed");
  if (data.d() > cap) throw ConfigError("quality_sweep: d exceeds the dense cap");
  for (std::size_t m : m_grid) {
    if (m == 0 || m > data.d()) throw ConfigError("quality_sweep: every m must be in [1, d]");
  }

  const LossModel plain = model.with_lambda(0.0);
  const DenseMatrix h = plain.full_hessian(data, w, cap);
  const double d_eff = effective_dimension(h, lambda);
  const auto all = all_indices(data.n());

  std::vector<ApproxQualityReport> out;
  out.reserve(m_grid.size() * seeds);
  for (std::size_t m : m_grid) {
    for (std::size_t s = 0; s < seeds; ++s) {
      Rng rng(derive_seed(master_seed, s), Stream::columns);
      const auto omega = sample_columns(data.d(), m, rng);
      const DenseMatrix c = plain.hessian_columns(data, all, w, omega);
      const NystromFactor f = build_factor(c, omega, 1.0);
      const DenseMatrix n = dense_reconstruct(f, cap);

      ApproxQualityReport r;
      r.m = m;
      r.seed = s;
      r.k = f.rank();
      r.rel_error_fro = rel_error(h, n, NormKind::fro);
      r.rel_error_spec = rel_error(h, n, NormKind::spec);
      const Vector ev = sym_eigenvalues(n);
      r.lambda_min_n = ev.minCoeff();
      r.lambda_max_n = ev.maxCoeff();
      r.rank_n = numerical_rank(n);
      const NewtonCloseness nc = newton_closeness(h, n, lambda);
      r.newton_closeness_lhs = nc.lhs;
      r.newton_closeness_rhs = nc.rhs;
      r.effective_dim = d_eff;
      out.push_back(r);
    }
  }
  return out;
}

}  // namespace nysopt
