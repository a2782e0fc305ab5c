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

#include "nysopt/kernels.hpp"

namespace nysopt::kernels::detail {
namespace {

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void scale_into_scalar(double a, const double* x, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a * x[i];
}

double sparse_dot_scalar(const std::uint32_t* idx, const double* val, std::size_t nnz,
                         const double* dense) {
  double acc = 0.0;
  for (std::size_t j = 0; j < nnz; ++j) acc += val[j] * dense[idx[j]];
  return acc;
}

void sparse_axpy_scalar(double a, const std::uint32_t* idx, const double* val,
                        std::size_t nnz, double* dense) {
  for (std::size_t j = 0; j < nnz; ++j) dense[idx[j]] += a * val[j];
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable t{dot_scalar, axpy_scalar, scale_into_scalar, sparse_dot_scalar,
                             sparse_axpy_scalar};
  return t;
}

}  // namespace nysopt::kernels::detail
