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

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "nysopt/kernels.hpp"
#include "nysopt/rng.hpp"

namespace nysopt::kernels {
namespace {

std::vector<double> random_vec(std::size_t n, Rng& rng) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.normal();
  return v;
}

class IsaScope {
 public:
  explicit IsaScope(Isa isa) : saved_(active_isa()) { set_active_isa(isa); }
  ~IsaScope() { set_active_isa(saved_); }

 private:
  Isa saved_;
};

TEST(Kernels, ScalarTableMatchesNaiveLoops) {
  Rng rng(7);
  const auto& t = table(Isa::scalar);
  for (std::size_t n : {0u, 1u, 5u, 64u, 131u}) {
    const auto x = random_vec(n, rng), y = random_vec(n, rng);
    double ref = 0.0;
    for (std::size_t i = 0; i < n; ++i) ref += x[i] * y[i];
    EXPECT_EQ(t.dot(x.data(), y.data(), n), ref);

    auto out = y;
    t.axpy(0.5, x.data(), out.data(), n);
    for (std::size_t i = 0; i < n; ++i) EXPECT_EQ(out[i], y[i] + 0.5 * x[i]);

    t.scale_into(-3.0, x.data(), out.data(), n);
    for (std::size_t i = 0; i < n; ++i) EXPECT_EQ(out[i], -3.0 * x[i]);
  }
}

TEST(Kernels, ActiveIsaIsAvailable) {
  EXPECT_TRUE(isa_available(Isa::scalar));
  EXPECT_TRUE(isa_available(active_isa()));
  EXPECT_TRUE(isa_available(detected_isa()));
}

TEST(Kernels, SetActiveIsaSwitchesTable) {
  IsaScope scope(Isa::scalar);
  EXPECT_EQ(active_isa(), Isa::scalar);
  EXPECT_EQ(&active(), &table(Isa::scalar));
}

#if defined(NYSOPT_HAVE_AVX2)

class Avx2Equivalence : public ::testing::Test {
 protected:
  void SetUp() override {
    if (!isa_available(Isa::avx2)) GTEST_SKIP() << "CPU lacks AVX2/FMA";
  }
};

TEST_F(Avx2Equivalence, Dot) {
  Rng rng(11);
  const auto& s = table(Isa::scalar);
  const auto& v = table(Isa::avx2);
  for (std::size_t n = 0; n <= 70; ++n) {
    const auto x = random_vec(n, rng), y = random_vec(n, rng);
    double abs_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) abs_sum += std::abs(x[i] * y[i]);
    EXPECT_NEAR(v.dot(x.data(), y.data(), n), s.dot(x.data(), y.data(), n),
                4.0 * double(n + 1) * 1.2e-16 * abs_sum)
        << "n=" << n;
  }
}

TEST_F(Avx2Equivalence, AxpyAndScale) {
  Rng rng(12);
  for (std::size_t n = 0; n <= 70; ++n) {
    const auto x = random_vec(n, rng), y = random_vec(n, rng);
    auto ys = y, yv = y;
    table(Isa::scalar).axpy(1.7, x.data(), ys.data(), n);
    table(Isa::avx2).axpy(1.7, x.data(), yv.data(), n);
    for (std::size_t i = 0; i < n; ++i) {
      // fused multiply-add rounds once instead of twice
      EXPECT_NEAR(yv[i], ys[i], 2.3e-16 * (std::abs(1.7 * x[i]) + std::abs(y[i])));
    }
    std::vector<double> os(n), ov(n);
    table(Isa::scalar).scale_into(0.3, x.data(), os.data(), n);
    table(Isa::avx2).scale_into(0.3, x.data(), ov.data(), n);
    EXPECT_EQ(os, ov);
  }
}

TEST_F(Avx2Equivalence, SparseKernels) {
  Rng rng(13);
  const std::size_t d = 300;
  const auto dense = random_vec(d, rng);
  for (std::size_t nnz = 0; nnz <= 40; ++nnz) {
    std::vector<std::uint32_t> idx;
    for (std::size_t k = 0; k < nnz; ++k) idx.push_back(std::uint32_t(k * 7 + rng.uniform_index(7)));
    const auto val = random_vec(nnz, rng);
    double abs_sum = 0.0;
    for (std::size_t k = 0; k < nnz; ++k) abs_sum += std::abs(val[k] * dense[idx[k]]);
    EXPECT_NEAR(table(Isa::avx2).sparse_dot(idx.data(), val.data(), nnz, dense.data()),
                table(Isa::scalar).sparse_dot(idx.data(), val.data(), nnz, dense.data()),
                4.0 * double(nnz + 1) * 1.2e-16 * abs_sum);
    auto ds = dense, dv = dense;
    table(Isa::scalar).sparse_axpy(-0.7, idx.data(), val.data(), nnz, ds.data());
    table(Isa::avx2).sparse_axpy(-0.7, idx.data(), val.data(), nnz, dv.data());
    for (std::size_t i = 0; i < d; ++i) {
      EXPECT_NEAR(dv[i], ds[i], 2.3e-16 * (std::abs(dense[i]) + 1.0));
    }
  }
}

TEST_F(Avx2Equivalence, UnalignedPointers) {
  Rng rng(14);
  const auto x = random_vec(67, rng), y = random_vec(67, rng);
  for (std::size_t off = 0; off < 4; ++off) {
    const std::size_t n = 60;
    const double a = table(Isa::avx2).dot(x.data() + off, y.data() + off, n);
    const double b = table(Isa::scalar).dot(x.data() + off, y.data() + off, n);
    EXPECT_NEAR(a, b, 1e-12);
  }
}

#endif

}  // namespace
}  // namespace nysopt::kernels
