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
#include <limits>

#include <gtest/gtest.h>

#include "nysopt/errors.hpp"
#include "nysopt/linalg.hpp"
#include "oracle.hpp"

namespace nysopt {
namespace {

TEST(SymEig, ReconstructsSpsdMatrices) {
  Rng rng(101);
  for (int trial = 0; trial < 40; ++trial) {
    const Eigen::Index d = 2 + Eigen::Index(rng.uniform_index(40));
    Vector s(d);
    for (Eigen::Index i = 0; i < d; ++i) s(i) = std::exp(4.0 * rng.normal());
    const DenseMatrix m = oracle::spsd_with_spectrum(d, s, rng);
    const EigenPair e = sym_eig_truncated(m, d, 0.0);
    const DenseMatrix back = e.vectors * e.values.asDiagonal() * e.vectors.transpose();
    EXPECT_LE(oracle::fro(back - m) / oracle::fro(m), 1e-9) << "trial " << trial;
  }
}

TEST(SymEig, AgreesWithJacobiOracle) {
  Rng rng(102);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index d = 3 + Eigen::Index(rng.uniform_index(15));
    const DenseMatrix g = oracle::gaussian(d, d, rng);
    const DenseMatrix m = g * g.transpose();
    const EigenPair e = sym_eig_truncated(m, d, 0.0);
    const oracle::SymEig ref = oracle::jacobi_eig(m);
    ASSERT_EQ(e.rank(), d);
    for (Eigen::Index i = 0; i < d; ++i) {
      // library output is descending, the oracle ascending
      EXPECT_NEAR(e.values(i), ref.values(d - 1 - i), 1e-10 * ref.values(d - 1));
    }
  }
}

TEST(SymEig, TruncatesAndClamps) {
  Vector s(5);
  s << 10.0, 5.0, 1.0, 1e-13, 0.0;
  Rng rng(103);
  const DenseMatrix m = oracle::spsd_with_spectrum(8, s, rng);
  const EigenPair all = sym_eig_truncated(m, 8, 1e-10);
  EXPECT_EQ(all.rank(), 3);
  EXPECT_NEAR(all.values(0), 10.0, 1e-12);
  EXPECT_NEAR(all.values(2), 1.0, 1e-12);
  const EigenPair two = sym_eig_truncated(m, 2, 1e-10);
  EXPECT_EQ(two.rank(), 2);
  EXPECT_EQ(two.dim(), 8);
}

TEST(SymEig, ZeroMatrixGivesEmptyPair) {
  const EigenPair e = sym_eig_truncated(DenseMatrix::Zero(4, 4), 4, 1e-10);
  EXPECT_EQ(e.rank(), 0);
  EXPECT_EQ(pinv_from_eig(e).norm(), 0.0);
}

TEST(SymEig, RejectsBadInput) {
  DenseMatrix m = DenseMatrix::Identity(3, 3);
  m(0, 1) = 1e-3;
  EXPECT_THROW(sym_eig_truncated(m, 3, 0.0), NumericalError);
  DenseMatrix n = DenseMatrix::Identity(3, 3);
  n(2, 2) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(sym_eig_truncated(n, 3, 0.0), NumericalError);
}

TEST(Pinv, PenroseConditionsOnRankDeficientInput) {
  Rng rng(104);
  for (int trial = 0; trial < 40; ++trial) {
    const Eigen::Index d = 2 + Eigen::Index(rng.uniform_index(19));
    const Eigen::Index r = 1 + Eigen::Index(rng.uniform_index(std::uint64_t(d)));
    Vector s(r);
    for (Eigen::Index i = 0; i < r; ++i) s(i) = 0.1 + 10.0 * rng.uniform01();
    const DenseMatrix m = oracle::spsd_with_spectrum(d, s, rng);
    const DenseMatrix p = pinv_from_eig(sym_eig_truncated(m, d, 1e-10));
    EXPECT_LE(oracle::fro(m * p * m - m), 1e-8);
    EXPECT_LE(oracle::fro(p * m * p - p), 1e-8);
    EXPECT_LE(oracle::fro((m * p).transpose() - m * p), 1e-8);
    EXPECT_LE(oracle::fro((p * m).transpose() - p * m), 1e-8);
  }
}

double relative_residual(const DenseMatrix& a, const Vector& x, const Vector& b) {
  return (a * x - b).norm() / b.norm();
}

TEST(SpdSolve, MatchesGaussianElimination) {
  Rng rng(105);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index d = 1 + Eigen::Index(rng.uniform_index(30));
    const DenseMatrix g = oracle::gaussian(d, d, rng);
    const DenseMatrix a = g * g.transpose() + DenseMatrix::Identity(d, d);
    const Vector b = oracle::gaussian(d, rng);
    const Vector x = spd_solve(a, b);
    const Vector ref = oracle::gauss_solve(a, b);
    EXPECT_LE((x - ref).norm() / ref.norm(), 1e-12);
  }
}

TEST(SpdSolve, TightResidualUpToModerateConditioning) {
  Rng rng(106);
  for (double cond : {1e1, 1e3, 1e5}) {
    for (int trial = 0; trial < 5; ++trial) {
      const Eigen::Index d = 20;
      Vector s(d);
      for (Eigen::Index i = 0; i < d; ++i) s(i) = std::pow(cond, -double(i) / double(d - 1));
      const DenseMatrix a = oracle::spsd_with_spectrum(d, s, rng);
      const Vector b = oracle::gaussian(d, rng);
      EXPECT_LE(relative_residual(a, spd_solve(a, b), b), 1e-10) << "cond " << cond;
    }
  }
}

// At condition 1e8 a Cholesky solve is backward stable but the relative
// residual itself is not bounded by 1e-10; check the backward-error form.
TEST(SpdSolve, BackwardStableAtHighConditioning) {
  Rng rng(107);
  const double eps = std::numeric_limits<double>::epsilon();
  for (int trial = 0; trial < 5; ++trial) {
    const Eigen::Index d = 20;
    Vector s(d);
    for (Eigen::Index i = 0; i < d; ++i) s(i) = std::pow(1e8, -double(i) / double(d - 1));
    const DenseMatrix a = oracle::spsd_with_spectrum(d, s, rng);
    const Vector b = oracle::gaussian(d, rng);
    const Vector x = spd_solve(a, b);
    const double bound = 10.0 * double(d) * eps * spectral_norm_sym(a) * x.norm();
    EXPECT_LE((a * x - b).norm(), bound);
  }
}

TEST(SpdSolve, ThrowsOnIndefiniteMatrix) {
  DenseMatrix a = DenseMatrix::Identity(3, 3);
  a(1, 1) = -1.0;
  EXPECT_THROW(spd_solve(a, Vector(Vector::Ones(3))), SingularMatrixError);
}

TEST(Norms, FrobeniusAndSpectral) {
  DenseMatrix a(2, 2);
  a << 3.0, 0.0, 0.0, -4.0;
  EXPECT_DOUBLE_EQ(frobenius_norm(a), 5.0);
  EXPECT_DOUBLE_EQ(spectral_norm_sym(a), 4.0);
  EXPECT_TRUE(all_finite(a));
  a(0, 1) = std::numeric_limits<double>::infinity();
  EXPECT_FALSE(all_finite(a));
}

}  // namespace
}  // namespace nysopt
