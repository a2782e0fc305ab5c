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

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <gtest/gtest.h>
#include <zlib.h>

#include "nysopt/data.hpp"
#include "nysopt/errors.hpp"

namespace nysopt {
namespace {

Dataset parse(const std::string& text, std::optional<std::size_t> dim = {}) {
  std::istringstream in(text);
  return parse_libsvm(in, dim);
}

std::size_t error_line(const std::string& text) {
  try {
    parse(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

TEST(Libsvm, ParsesRowsLabelsAndDimension) {
  const Dataset d = parse("+1 1:0.5 3:-2\n-1 2:1e-3\n# comment only\n\n0 4:7 # trailing\n1\n");
  ASSERT_EQ(d.n(), 4u);
  EXPECT_EQ(d.d(), 4u);
  EXPECT_EQ(d.nnz(), 4u);
  EXPECT_EQ(d.label(0), 1.0);
  EXPECT_EQ(d.label(1), -1.0);
  EXPECT_EQ(d.label(2), -1.0);
  EXPECT_EQ(d.label(3), 1.0);
  const auto r0 = d.row(0);
  ASSERT_EQ(r0.idx.size(), 2u);
  EXPECT_EQ(r0.idx[0], 0u);
  EXPECT_EQ(r0.idx[1], 2u);
  EXPECT_EQ(r0.val[1], -2.0);
  EXPECT_EQ(d.row(3).idx.size(), 0u);
}

TEST(Libsvm, DimensionOverride) {
  EXPECT_EQ(parse("1 2:1\n", 10).d(), 10u);
  EXPECT_THROW(parse("1 12:1\n", 10), ConfigError);
}

TEST(Libsvm, RejectsMalformedLinesWithLocation) {
  EXPECT_EQ(error_line("1 1:1\n2 1:1\n"), 2u);
  EXPECT_EQ(error_line("1 1:1\n-1 0:1\n"), 2u);
  EXPECT_EQ(error_line("1 1:1\n\n-1 3:1 2:1\n"), 3u);
  EXPECT_EQ(error_line("1 1:1 1:2\n"), 1u);
  EXPECT_EQ(error_line("1 1:abc\n"), 1u);
  EXPECT_EQ(error_line("1 1:nan\n"), 1u);
  EXPECT_EQ(error_line("1 1:inf\n"), 1u);
  EXPECT_EQ(error_line("yes 1:1\n"), 1u);
  EXPECT_EQ(error_line("1 1:1\n1 x:1\n"), 2u);
  EXPECT_EQ(error_line("1 1:1 junk\n"), 1u);
  EXPECT_EQ(error_line("1 -3:1\n"), 1u);
}

Dataset random_dataset(std::uint64_t seed) {
  Rng rng(seed);
  const std::size_t n = 1 + rng.uniform_index(40);
  const std::size_t d = 1 + rng.uniform_index(60);
  std::vector<std::size_t> ptr{0};
  std::vector<Index> cols;
  std::vector<double> vals;
  std::vector<double> labels;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      if (rng.uniform01() < 0.2) {
        cols.push_back(Index(j));
        // awkward magnitudes exercise shortest round-trip formatting
        vals.push_back(rng.normal() * std::pow(10.0, double(rng.uniform_index(40)) - 20.0));
      }
    }
    ptr.push_back(cols.size());
    labels.push_back(rng.uniform01() < 0.5 ? 1.0 : -1.0);
  }
  return Dataset(d, std::move(ptr), std::move(cols), std::move(vals), std::move(labels));
}

TEST(Libsvm, RoundTripIsIdentity) {
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const Dataset a = random_dataset(seed);
    std::stringstream s;
    write_libsvm(s, a);
    const Dataset b = parse_libsvm(s, a.d());
    EXPECT_TRUE(a == b) << "seed " << seed;
  }
}

TEST(Libsvm, ReadsGzipFiles) {
  const Dataset a = random_dataset(77);
  std::stringstream s;
  write_libsvm(s, a);
  const std::string text = s.str();
  const auto dir = std::filesystem::temp_directory_path() / "nysopt_data_test";
  std::filesystem::create_directories(dir);
  const auto gz = dir / "rows.svm.gz";
  gzFile f = gzopen(gz.string().c_str(), "wb");
  ASSERT_NE(f, nullptr);
  ASSERT_EQ(gzwrite(f, text.data(), unsigned(text.size())), int(text.size()));
  gzclose(f);
  const auto plain = dir / "rows.svm";
  std::ofstream(plain) << text;
  EXPECT_TRUE(load_libsvm(gz, a.d()) == a);
  EXPECT_TRUE(load_libsvm(plain, a.d()) == a);
  std::filesystem::remove_all(dir);
}

TEST(Dataset, ValidatesInvariants) {
  EXPECT_THROW(Dataset(3, {0, 1}, {3}, {1.0}, {1.0}), ConfigError);
  EXPECT_THROW(Dataset(3, {0, 2}, {1, 1}, {1.0, 1.0}, {1.0}), ConfigError);
  EXPECT_THROW(Dataset(3, {0, 1}, {1}, {1.0}, {0.5}), ConfigError);
  EXPECT_THROW(Dataset(3, {0, 1}, {1}, {NAN}, {1.0}), ConfigError);
  EXPECT_NO_THROW(Dataset(3, {0, 1}, {1}, {1.0}, {-1.0}));
}

TEST(Dataset, SubsetHeadScaledAndDimension) {
  const Dataset a = parse("1 1:2 3:-4\n-1 2:8\n1 3:1\n");
  const std::vector<Index> rows{2, 0, 2};
  const Dataset s = a.subset(rows);
  EXPECT_EQ(s.n(), 3u);
  EXPECT_EQ(s.row(1).val[1], -4.0);
  EXPECT_EQ(a.head(2).n(), 2u);
  const auto scales = max_abs_scales(a);
  EXPECT_EQ(scales, (std::vector<double>{0.5, 0.125, 0.25}));
  const Dataset sc = a.scaled(scales);
  EXPECT_EQ(sc.row(0).val[0], 1.0);
  EXPECT_EQ(sc.row(0).val[1], -1.0);
  EXPECT_EQ(a.with_dimension(9).d(), 9u);
}

TEST(BatchSampler, ReproducibleForSameSeed) {
  for (auto mode : {SamplingMode::with_replacement, SamplingMode::without_replacement}) {
    BatchSampler a(5, 7, 50, mode), b(5, 7, 50, mode);
    for (int t = 0; t < 40; ++t) {
      const auto x = a.next();
      const std::vector<Index> xv(x.begin(), x.end());
      const auto y = b.next();
      EXPECT_EQ(xv, std::vector<Index>(y.begin(), y.end()));
    }
  }
}

TEST(BatchSampler, WithoutReplacementCoversEachRowOncePerPass) {
  const std::size_t n = 23, b = 5;
  BatchSampler s(9, b, n, SamplingMode::without_replacement);
  for (int pass = 0; pass < 4; ++pass) {
    std::multiset<Index> seen;
    const std::size_t batches = (n + b - 1) / b;
    for (std::size_t k = 0; k < batches; ++k) {
      const auto batch = s.next();
      EXPECT_EQ(batch.size(), k + 1 == batches ? n - b * (batches - 1) : b);
      seen.insert(batch.begin(), batch.end());
    }
    ASSERT_EQ(seen.size(), n);
    for (Index i = 0; i < n; ++i) EXPECT_EQ(seen.count(i), 1u);
  }
}

TEST(BatchSampler, WithReplacementFrequenciesAreUniform) {
  const std::size_t n = 20, b = 8, draws = 5000;
  BatchSampler s(17, b, n, SamplingMode::with_replacement);
  std::vector<double> count(n, 0.0);
  for (std::size_t t = 0; t < draws; ++t) {
    for (Index i : s.next()) count[i] += 1.0;
  }
  const double total = double(draws * b);
  const double p = 1.0 / double(n);
  const double sd = std::sqrt(total * p * (1.0 - p));
  for (std::size_t i = 0; i < n; ++i) EXPECT_LE(std::abs(count[i] - total * p), 3.0 * sd) << i;
}

TEST(BatchSampler, RejectsBadSizes) {
  EXPECT_THROW(BatchSampler(1, 0, 10, SamplingMode::with_replacement), ConfigError);
  EXPECT_THROW(BatchSampler(1, 11, 10, SamplingMode::without_replacement), ConfigError);
}

TEST(Synthetic, AdultLikeShape) {
  const Dataset a = make_adult_like(3000, 4);
  EXPECT_EQ(a.d(), 123u);
  EXPECT_EQ(a.n(), 3000u);
  double pos = 0.0;
  for (double y : a.labels()) pos += y > 0.0;
  EXPECT_GT(pos / 3000.0, 0.18);
  EXPECT_LT(pos / 3000.0, 0.30);
  for (std::size_t i = 0; i < a.n(); ++i) {
    EXPECT_GE(a.row(i).idx.size(), 12u);
    EXPECT_LE(a.row(i).idx.size(), 14u);
  }
  EXPECT_TRUE(make_adult_like(100, 4) == make_adult_like(100, 4));
  EXPECT_FALSE(make_adult_like(100, 4) == make_adult_like(100, 5));
}

TEST(Synthetic, SparseGaussianShape) {
  const Dataset a = make_sparse_gaussian(50, 30, 6, 2);
  EXPECT_EQ(a.nnz(), 300u);
  EXPECT_EQ(a.d(), 30u);
  EXPECT_THROW(make_sparse_gaussian(5, 3, 4, 1), ConfigError);
}

}  // namespace
}  // namespace nysopt
