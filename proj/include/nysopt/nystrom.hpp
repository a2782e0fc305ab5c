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

// Rank-k Nystrom approximation N = Z Z^T of a PSD Hessian from m sampled
// columns, and the Woodbury inverse-apply of (N + rho I)^{-1}.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "nysopt/data.hpp"
#include "nysopt/linalg.hpp"
#include "nysopt/rng.hpp"

namespace nysopt {

struct NystromFactor {
  DenseMatrix z;  // d x k
  DenseMatrix q;  // d x k, (1/rho^2) Z (I_k + Z^T Z / rho)^{-1}
  std::vector<Index> omega;
  double rho = 1.0;
  std::size_t epoch = 0;

  std::size_t dim() const { return static_cast<std::size_t>(z.rows()); }
  std::size_t rank() const { return static_cast<std::size_t>(z.cols()); }
};

// m distinct indices drawn uniformly from [0, d), sorted ascending.
std::vector<Index> sample_columns(std::size_t d, std::size_t m, Rng& rng);

// Default eigenvalue clamp for an m x m intersection block.
inline double default_clamp(std::size_t m) { return 1e-10 * static_cast<double>(m); }

// Builds the factor from the d x m column block C whose columns are the
// Hessian columns at the distinct indices `omega`. k is the number of
// eigenvalues of the intersection block above the clamp, capped by k_max.
// A block with nothing above the clamp yields the k = 0 factor, for which
// apply_inverse is v / rho.
NystromFactor build_factor(const DenseMatrix& c, std::span<const Index> omega, double rho,
                           std::optional<std::size_t> k_max = {},
                           std::optional<double> clamp = {});

// Factor with a given Z (used when Z comes from elsewhere, e.g. tests).
NystromFactor factor_from_z(DenseMatrix z, double rho);

// (1/rho) v - Q (Z^T v), O(dk).
Vector apply_inverse(const NystromFactor& f, const Vector& v);

// Allocation-free variant; `scratch` holds the k-vector Z^T v.
void apply_inverse_into(const NystromFactor& f, std::span<const double> v, std::span<double> out,
                        Vector& scratch);

// Z Z^T. Refuses d > cap.
DenseMatrix dense_reconstruct(const NystromFactor& f, std::size_t cap = 2000);

}  // namespace nysopt
