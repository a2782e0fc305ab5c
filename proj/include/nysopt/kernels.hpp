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

// Vector kernels used by the inner loops of the optimizers and the Nystrom
// inverse-apply. Every kernel has a scalar reference implementation and, on
// x86-64, an AVX2+FMA variant selected at runtime. The active variant is
// process-wide and fixed for the lifetime of a run so that traces stay
// reproducible.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace nysopt::kernels {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa);

// Best variant supported by the CPU and compiled into this binary.
Isa detected_isa();

// Variant used by the free functions below. Initialised from the NYSOPT_ISA
// environment variable ("scalar" or "avx2") when set, else detected_isa().
Isa active_isa();

// Throws std::invalid_argument if `isa` is not available on this machine.
void set_active_isa(Isa isa);

bool isa_available(Isa isa);

struct KernelTable {
  // sum_i x[i] * y[i]
  double (*dot)(const double* x, const double* y, std::size_t n);
  // y += a * x
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  // out = a * x
  void (*scale_into)(double a, const double* x, double* out, std::size_t n);
  // sum_j val[j] * dense[idx[j]]
  double (*sparse_dot)(const std::uint32_t* idx, const double* val, std::size_t nnz,
                       const double* dense);
  // dense[idx[j]] += a * val[j]
  void (*sparse_axpy)(double a, const std::uint32_t* idx, const double* val,
                      std::size_t nnz, double* dense);
};

// Throws std::invalid_argument if `isa` is not available.
const KernelTable& table(Isa isa);

const KernelTable& active();

inline double dot(std::span<const double> x, std::span<const double> y) {
  return active().dot(x.data(), y.data(), x.size());
}

inline void axpy(double a, std::span<const double> x, std::span<double> y) {
  active().axpy(a, x.data(), y.data(), x.size());
}

inline void scale_into(double a, std::span<const double> x, std::span<double> out) {
  active().scale_into(a, x.data(), out.data(), x.size());
}

inline double sparse_dot(std::span<const std::uint32_t> idx, std::span<const double> val,
                         std::span<const double> dense) {
  return active().sparse_dot(idx.data(), val.data(), idx.size(), dense.data());
}

inline void sparse_axpy(double a, std::span<const std::uint32_t> idx,
                        std::span<const double> val, std::span<double> dense) {
  active().sparse_axpy(a, idx.data(), val.data(), idx.size(), dense.data());
}

namespace detail {
const KernelTable& scalar_table();
#if defined(NYSOPT_HAVE_AVX2)
const KernelTable& avx2_table();
#endif
}  // namespace detail

}  // namespace nysopt::kernels
