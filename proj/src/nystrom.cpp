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

#include "nysopt/nystrom.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_set>

#include "nysopt/errors.hpp"
#include "nysopt/kernels.hpp"

namespace nysopt {

std::vector<Index> sample_columns(std::size_t d, std::size_t m, Rng& rng) {
  if (m == 0 || m > d) {
    throw ConfigError("sample_columns: need 1 <= m <= d (m = " + std::to_string(m) +
                      ", d = " + std::to_string(d) + ")");
  }
  // Floyd's algorithm: m draws regardless of d.
  std::unordered_set<Index> chosen;
  chosen.reserve(m * 2);
  std::vector<Index> out;
  out.reserve(m);
  for (std::size_t j = d - m; j < d; ++j) {
    auto t = static_cast<Index>(rng.uniform_index(j + 1));
    if (!chosen.insert(t).second) {
      t = static_cast<Index>(j);
      chosen.insert(t);
    }
    out.push_back(t);
  }
  std::sort(out.begin(), out.end());
  return out;
}

NystromFactor factor_from_z(DenseMatrix z, double rho) {
  if (!(rho > 0.0) || !std::isfinite(rho)) throw ConfigError("Nystrom factor: rho must be > 0");
  if (!z.allFinite()) throw NumericalError("Nystrom factor: non-finite Z");
  NystromFactor f;
  const Eigen::Index k = z.cols();
  f.rho = rho;
  if (k > 0) {
    DenseMatrix inner = DenseMatrix::Identity(k, k);
    inner.noalias() += (z.transpose() * z) / rho;
    // Q^T = (1/rho^2) inner^{-1} Z^T since inner is symmetric
    DenseMatrix qt = spd_solve(inner, DenseMatrix(z.transpose()));
    f.q = qt.transpose() / (rho * rho);
  } else {
    f.q.resize(z.rows(), 0);
  }
  f.z = std::move(z);
  return f;
}

NystromFactor build_factor(const DenseMatrix& c, std::span<const Index> omega, double rho,
                           std::optional<std::size_t> k_max, std::optional<double> clamp) {
  const auto m = static_cast<Eigen::Index>(omega.size());
  if (m == 0 || c.cols() != m) throw ConfigError("build_factor: C must have one column per index");
  if (!c.allFinite()) throw NumericalError("build_factor: non-finite entries in C");
  std::unordered_set<Index> distinct;
  for (Index j : omega) {
    if (j >= static_cast<std::size_t>(c.rows())) {
      throw ConfigError("build_factor: column index out of range");
    }
    if (!distinct.insert(j).second) throw ConfigError("build_factor: duplicate column index");
  }

  // intersection block: rows omega of C
  DenseMatrix block(m, m);
  for (Eigen::Index r = 0; r < m; ++r) block.row(r) = c.row(omega[static_cast<std::size_t>(r)]);

  const Eigen::Index cap = k_max ? static_cast<Eigen::Index>(*k_max) : m;
  const EigenPair e =
      sym_eig_truncated(block, std::min(cap, m), clamp.value_or(default_clamp(omega.size())));

  DenseMatrix z;
  if (e.rank() > 0) {
    const Vector inv_sqrt = e.values.cwiseSqrt().cwiseInverse();
    z.noalias() = c * (e.vectors * inv_sqrt.asDiagonal());
  } else {
    z.resize(c.rows(), 0);
  }
  NystromFactor f = factor_from_z(std::move(z), rho);
  f.omega.assign(omega.begin(), omega.end());
  return f;
}

void apply_inverse_into(const NystromFactor& f, std::span<const double> v, std::span<double> out,
                        Vector& scratch) {
  if (v.size() != f.dim() || out.size() != f.dim()) {
    throw ConfigError("apply_inverse: vector length does not match the factor dimension");
  }
  const Eigen::Index k = f.z.cols();
  scratch.resize(k);
  for (Eigen::Index j = 0; j < k; ++j) scratch(j) = kernels::dot(column(f.z, j), v);
  kernels::scale_into(1.0 / f.rho, v, out);
  for (Eigen::Index j = 0; j < k; ++j) kernels::axpy(-scratch(j), column(f.q, j), out);
}

Vector apply_inverse(const NystromFactor& f, const Vector& v) {
  Vector out(v.size());
  Vector scratch;
  apply_inverse_into(f, as_span(v), as_span(out), scratch);
  return out;
}

DenseMatrix dense_reconstruct(const NystromFactor& f, std::size_t cap) {
  if (f.dim() > cap) {
    throw ConfigError("dense_reconstruct: d = " + std::to_string(f.dim()) +
                      " exceeds the dense cap " + std::to_string(cap));
  }
  DenseMatrix n = f.z * f.z.transpose();
  // the product is symmetric only up to rounding in the blocked kernel
  return 0.5 * (n + n.transpose());
}

}  // namespace nysopt
