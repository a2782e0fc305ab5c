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

// Hessian-approximation quality: relative error, spectrum of the Nystrom
// approximation, effective dimension and the distance of the regularized
// inverse to the exact regularized Newton inverse.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "nysopt/data.hpp"
#include "nysopt/linalg.hpp"
#include "nysopt/loss.hpp"

namespace nysopt {

enum class NormKind { fro, spec };

// ||H - N|| / ||H||. Throws NumericalError when ||H|| = 0.
double rel_error(const DenseMatrix& h, const DenseMatrix& n, NormKind norm);

// trace(H (H + lambda I)^{-1}) = sum_i s_i / (s_i + lambda).
double effective_dimension(const DenseMatrix& h, double lambda);

struct NewtonCloseness {
  double lhs = 0.0;  // ||(N + lambda I)^{-1} - (H + lambda I)^{-1}||_2
  double rhs = 0.0;  // ||J|| / (lambda (||J|| + lambda)), J = H - N
  bool holds() const { return lhs <= rhs + 1e-8; }
};

NewtonCloseness newton_closeness(const DenseMatrix& h, const DenseMatrix& n, double lambda);

struct ApproxQualityReport {
  std::size_t m = 0;
  std::uint64_t seed = 0;
  std::size_t k = 0;
  double rel_error_fro = 0.0;
  double rel_error_spec = 0.0;
  std::size_t rank_n = 0;  // numerical rank of Z Z^T
  double lambda_min_n = 0.0;
  double lambda_max_n = 0.0;
  double newton_closeness_lhs = 0.0;
  double newton_closeness_rhs = 0.0;
  double effective_dim = 0.0;
};

// For each m and each of `seeds` replicates: sample m columns, build
// N = Z Z^T from the unregularized Hessian at w (no lambda, no rho) and
// compare against the full unregularized Hessian. `lambda` is used for the
// effective dimension and the closeness bound. Replicate s of size m draws
// its columns from derive_seed(master_seed, s).
std::vector<ApproxQualityReport> quality_sweep(const LossModel& model, const Dataset& data,
                                               const Vector& w, std::span<const std::size_t> m_grid,
                                               double lambda, std::size_t seeds,
                                               std::uint64_t master_seed = 0,
                                               std::size_t cap = kDefaultDenseCap);

// Number of eigenvalues above tol * max(|lambda_max|, 1) of a symmetric matrix.
std::size_t numerical_rank(const DenseMatrix& a, double tol = 1e-10);

}  // namespace nysopt
