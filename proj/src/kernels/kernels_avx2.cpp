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

// Compiled with -mavx2 -mfma. Nothing in this translation unit may run before
// the dispatcher has confirmed CPU support.

#include <immintrin.h>

#include "nysopt/kernels.hpp"

namespace nysopt::kernels::detail {
namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d sw = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, sw));
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
  __m256d a0 = _mm256_setzero_pd();
  __m256d a1 = _mm256_setzero_pd();
  __m256d a2 = _mm256_setzero_pd();
  __m256d a3 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 16 <= n; i += 16) {
    a0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), a0);
    a1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), a1);
    a2 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 8), _mm256_loadu_pd(y + i + 8), a2);
    a3 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 12), _mm256_loadu_pd(y + i + 12), a3);
  }
  for (; i + 4 <= n; i += 4) {
    a0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), a0);
  }
  double acc = hsum(_mm256_add_pd(_mm256_add_pd(a0, a1), _mm256_add_pd(a2, a3)));
  for (; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

void axpy_avx2(double a, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    _mm256_storeu_pd(y + i + 4, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i + 4),
                                                 _mm256_loadu_pd(y + i + 4)));
  }
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void scale_into_avx2(double a, const double* x, double* out, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out + i, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
  }
  for (; i < n; ++i) out[i] = a * x[i];
}

double sparse_dot_avx2(const std::uint32_t* idx, const double* val, std::size_t nnz,
                       const double* dense) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t j = 0;
  for (; j + 4 <= nnz; j += 4) {
    __m128i vi = _mm_loadu_si128(reinterpret_cast<const __m128i*>(idx + j));
    __m256d g = _mm256_i32gather_pd(dense, vi, 8);
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(val + j), g, acc);
  }
  double s = hsum(acc);
  for (; j < nnz; ++j) s += val[j] * dense[idx[j]];
  return s;
}

// AVX2 has no scatter; the products are formed four at a time and written
// back scalar. Indices within a row are distinct, so lanes never collide.
void sparse_axpy_avx2(double a, const std::uint32_t* idx, const double* val, std::size_t nnz,
                      double* dense) {
  const __m256d va = _mm256_set1_pd(a);
  alignas(32) double prod[4];
  std::size_t j = 0;
  for (; j + 4 <= nnz; j += 4) {
    _mm256_store_pd(prod, _mm256_mul_pd(va, _mm256_loadu_pd(val + j)));
    dense[idx[j]] += prod[0];
    dense[idx[j + 1]] += prod[1];
    dense[idx[j + 2]] += prod[2];
    dense[idx[j + 3]] += prod[3];
  }
  for (; j < nnz; ++j) dense[idx[j]] += a * val[j];
}

}  // namespace

const KernelTable& avx2_table() {
  static const KernelTable t{dot_avx2, axpy_avx2, scale_into_avx2, sparse_dot_avx2,
                             sparse_axpy_avx2};
  return t;
}

}  // namespace nysopt::kernels::detail
