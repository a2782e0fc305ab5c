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

#include "nysopt/diagnostics.hpp"
#include "nysopt/errors.hpp"
#include "nysopt/nystrom.hpp"
#include "oracle.hpp"

namespace nysopt {
namespace {

struct Instance {
  DenseMatrix h;
  DenseMatrix n;
  double lambda;
};

Instance random_instance(Rng& rng) {
  const Eigen::Index d = 2 + Eigen::Index(rng.uniform_index(14));
  const Eigen::Index r = 1 + Eigen::Index(rng.uniform_index(std::uint64_t(d)));
  Vector s(r);
  for (Eigen::Index i = 0; i < r; ++i) s(i) = std::exp(2.0 * rng.normal());
  const DenseMatrix h = oracle::spsd_with_spectrum(d, s, rng);
  const std::size_t m = 1 + rng.uniform_index(std::uint64_t(d));
  const auto omega = sample_columns(std::size_t(d), m, rng);
  DenseMatrix c(d, Eigen::Index(m));
  for (std::size_t j = 0; j < m; ++j) c.col(Eigen::Index(j)) = h.col(omega[j]);
  const NystromFactor f = build_factor(c, omega, 1.0);
  return {h, dense_reconstruct(f), std::pow(10.0, -3.0 + 3.0 * rng.uniform01())};
}

TEST(NewtonCloseness, BoundHoldsOnNystromInstances) {
  Rng rng(501);
  for (int t = 0; t < 100; ++t) {
    const Instance in = random_instance(rng);
    const NewtonCloseness nc = newton_closeness(in.h, in.n, in.lambda);
    EXPECT_TRUE(nc.holds()) << "trial " << t << ": " << nc.lhs << " > " << nc.rhs;
    // independent route for the left-hand side
    const Eigen::Index d = in.h.rows();
    const DenseMatrix id = DenseMatrix::Identity(d, d);
    DenseMatrix a(d, d), b(d, d);
    for (Eigen::Index j = 0; j < d; ++j) {
      a.col(j) = oracle::gauss_solve(in.n + in.lambda * id, id.col(j));
      b.col(j) = oracle::gauss_solve(in.h + in.lambda * id, id.col(j));
    }
    const Vector ev = oracle::jacobi_eig(0.5 * (a - b + (a - b).transpose())).values;
    const double lhs = std::max(std::abs(ev.minCoeff()), std::abs(ev.maxCoeff()));
    EXPECT_NEAR(nc.lhs, lhs, 1e-8 * std::max(1.0, lhs));
  }
}

TEST(NewtonCloseness, ScalarCaseIsTight) {
  for (double sigma : {0.5, 2.0, 10.0}) {
    for (double lambda : {0.1, 1.0}) {
      const DenseMatrix h = sigma * DenseMatrix::Identity(4, 4);
      const NewtonCloseness nc = newton_closeness(h, DenseMatrix::Zero(4, 4), lambda);
      EXPECT_NEAR(nc.lhs, nc.rhs, 1e-10);
      EXPECT_NEAR(nc.rhs, sigma / (lambda * (sigma + lambda)), 1e-12);
    }
  }
}

TEST(NewtonCloseness, TopEigenvalueSurrogate) {
  Rng rng(502);
  for (int t = 0; t < 50; ++t) {
    const Instance in = random_instance(rng);
    const double top_n = oracle::jacobi_eig(in.n).values.maxCoeff();
    const double top_h = oracle::jacobi_eig(in.h).values.maxCoeff();
    const Vector diff = oracle::jacobi_eig(in.h - in.n).values;
    const double j = std::max(std::abs(diff.minCoeff()), std::abs(diff.maxCoeff()));
    EXPECT_LE(top_n, top_h + j + 1e-8);
  }
}

TEST(EffectiveDimension, MonotoneAndBounded) {
  Rng rng(503);
  for (int t = 0; t < 20; ++t) {
    const Eigen::Index d = 3 + Eigen::Index(rng.uniform_index(20));
    const DenseMatrix g = oracle::gaussian(d, d / 2 + 1, rng);
    const DenseMatrix h = g * g.transpose();
    const Vector ev = oracle::jacobi_eig(h).values;
    double prev = INFINITY;
    for (double lambda : {1e-4, 1e-3, 1e-2, 1e-1, 1.0, 10.0}) {
      const double de = effective_dimension(h, lambda);
      double ref = 0.0;
      for (Eigen::Index i = 0; i < d; ++i) {
        const double s = std::max(ev(i), 0.0);
        ref += s / (s + lambda);
      }
      EXPECT_NEAR(de, ref, 1e-9 * double(d));
      EXPECT_LE(de, prev);
      EXPECT_LE(de, std::min(double(d), h.trace() / lambda) + 1e-9);
      prev = de;
    }
  }
  EXPECT_THROW(effective_dimension(DenseMatrix::Identity(2, 2), 0.0), ConfigError);
}

TEST(RelError, NormsAndZeroGuard) {
  DenseMatrix h = DenseMatrix::Identity(3, 3);
  DenseMatrix n = DenseMatrix::Zero(3, 3);
  n(0, 0) = 1.0;
  EXPECT_NEAR(rel_error(h, n, NormKind::fro), std::sqrt(2.0 / 3.0), 1e-15);
  EXPECT_NEAR(rel_error(h, n, NormKind::spec), 1.0, 1e-15);
  EXPECT_THROW(rel_error(DenseMatrix::Zero(3, 3), n, NormKind::fro), NumericalError);
}

TEST(NumericalRank, CountsAboveTolerance) {
  Rng rng(504);
  Vector s(3);
  s << 4.0, 1.0, 1e-13;
  EXPECT_EQ(numerical_rank(oracle::spsd_with_spectrum(6, s, rng)), 2u);
}

TEST(QualitySweep, ReproducibleAndExactAtFullRank) {
  const Dataset data = make_adult_like(800, 505);
  const LossModel model(LossKind::logistic, 1e-3);
  Rng rng(506);
  const Vector w = 0.2 * oracle::gaussian(Eigen::Index(data.d()), rng);
  const std::vector<std::size_t> grid{5, 123};
  const auto a = quality_sweep(model, data, w, grid, 1e-3, 3, 11);
  const auto b = quality_sweep(model, data, w, grid, 1e-3, 3, 11);
  ASSERT_EQ(a.size(), 6u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].rel_error_fro, b[i].rel_error_fro);
    EXPECT_EQ(a[i].k, b[i].k);
    EXPECT_EQ(a[i].newton_closeness_lhs, b[i].newton_closeness_lhs);
    EXPECT_LE(a[i].newton_closeness_lhs, a[i].newton_closeness_rhs + 1e-8);
    EXPECT_GE(a[i].lambda_min_n, -1e-10);
  }
  for (std::size_t i = 3; i < 6; ++i) {
    EXPECT_EQ(a[i].m, 123u);
    EXPECT_LE(a[i].rel_error_fro, 1e-8);
  }
  const auto c = quality_sweep(model, data, w, grid, 1e-3, 3, 12);
  EXPECT_NE(a[0].rel_error_fro, c[0].rel_error_fro);
  const std::vector<std::size_t> bad{124};
  EXPECT_THROW(quality_sweep(model, data, w, bad, 1e-3, 1), ConfigError);
}

}  // namespace
}  // namespace nysopt
