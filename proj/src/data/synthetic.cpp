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
#include <array>
#include <cmath>
#include <numeric>

#include "nysopt/data.hpp"
#include "nysopt/errors.hpp"

namespace nysopt {
namespace {

// Block sizes of the a9a encoding: age, workclass, fnlwgt, education,
// education-num, marital-status, occupation, relationship, race, sex,
// capital-gain, capital-loss, hours-per-week, native-country.
constexpr std::array<std::size_t, 14> kAdultGroups{5, 8, 5, 16, 5, 7, 14, 6, 5, 2, 2, 2, 5, 41};
constexpr std::size_t kEducation = 3;
constexpr std::size_t kEducationNum = 4;

std::size_t draw_category(Rng& rng, const std::vector<double>& cdf) {
  const double u = rng.uniform01() * cdf.back();
  return static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
}

constexpr double kPositiveRate = 0.24;
constexpr std::uint64_t kPopulationSeed = 0x5eed'ad01'7000'0001ULL;

}  // namespace

Dataset make_adult_like(std::size_t n, std::uint64_t seed) {
  // Category frequencies and label weights are shared by every draw so that
  // different seeds give samples of one population (train and test splits).
  Rng population(kPopulationSeed, Stream::synthesis);
  Rng rng(seed, Stream::synthesis);

  std::vector<std::size_t> offset(kAdultGroups.size());
  std::size_t dim = 0;
  for (std::size_t g = 0; g < kAdultGroups.size(); ++g) {
    offset[g] = dim;
    dim += kAdultGroups[g];
  }

  // Zipf-like category frequencies with a per-group exponent; the country
  // block is dominated by a single category as in the real data.
  std::vector<std::vector<double>> cdf(kAdultGroups.size());
  for (std::size_t g = 0; g < kAdultGroups.size(); ++g) {
    const double s = g == kAdultGroups.size() - 1 ? 2.5 : 0.6 + 0.9 * population.uniform01();
    std::vector<double> p(kAdultGroups[g]);
    for (std::size_t j = 0; j < p.size(); ++j) p[j] = 1.0 / std::pow(double(j + 1), s);
    population.shuffle(std::span<double>(p));
    std::partial_sum(p.begin(), p.end(), p.begin());
    cdf[g] = std::move(p);
  }

  std::vector<double> weight(dim);
  for (double& w : weight) w = 0.9 * population.normal();

  // One row: appends its columns and returns the sum of their weights.
  auto draw_row = [&](Rng& r, std::vector<Index>& cols) {
    std::size_t education = 0;
    double z = 0.0;
    for (std::size_t g = 0; g < kAdultGroups.size(); ++g) {
      // workclass and occupation are occasionally missing
      if ((g == 1 || g == 6) && r.uniform01() < 0.05) continue;
      std::size_t c = draw_category(r, cdf[g]);
      if (g == kEducation) education = c;
      if (g == kEducationNum && r.uniform01() < 0.9) {
        c = education * kAdultGroups[kEducationNum] / kAdultGroups[kEducation];
      }
      const auto col = static_cast<Index>(offset[g] + c);
      cols.push_back(col);
      z += weight[col];
    }
    return z;
  };

  // Bias set by bisection on a fixed pilot sample for a positive rate of kPositiveRate.
  std::vector<double> pilot(4000);
  std::vector<Index> scratch;
  for (double& z : pilot) {
    scratch.clear();
    z = draw_row(population, scratch);
  }
  double lo = -30.0, hi = 30.0;
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (lo + hi);
    double rate = 0.0;
    for (double z : pilot) rate += 1.0 / (1.0 + std::exp(-(z + mid)));
    (rate / double(pilot.size()) < kPositiveRate ? lo : hi) = mid;
  }
  const double bias = 0.5 * (lo + hi);

  std::vector<std::size_t> ptr{0};
  std::vector<Index> cols;
  std::vector<double> vals;
  std::vector<double> labels;
  cols.reserve(n * kAdultGroups.size());
  for (std::size_t i = 0; i < n; ++i) {
    const double z = bias + draw_row(rng, cols);
    vals.resize(cols.size(), 1.0);
    ptr.push_back(cols.size());
    const double p = 1.0 / (1.0 + std::exp(-z));
    labels.push_back(rng.uniform01() < p ? 1.0 : -1.0);
  }
  return Dataset(dim, std::move(ptr), std::move(cols), std::move(vals), std::move(labels));
}

Dataset make_sparse_gaussian(std::size_t n, std::size_t d, std::size_t nnz_per_row,
                             std::uint64_t seed) {
  if (nnz_per_row > d) throw ConfigError("make_sparse_gaussian: nnz_per_row exceeds d");
  Rng population(kPopulationSeed ^ d, Stream::synthesis);
  Rng rng(seed, Stream::synthesis);
  std::vector<double> truth(d);
  for (double& t : truth) t = population.normal();

  std::vector<std::size_t> ptr{0};
  std::vector<Index> cols;
  std::vector<double> vals;
  std::vector<double> labels;
  std::vector<Index> pool = all_indices(d);
  for (std::size_t i = 0; i < n; ++i) {
    // partial Fisher-Yates: the first nnz_per_row slots become the support
    for (std::size_t j = 0; j < nnz_per_row; ++j) {
      const auto k = j + static_cast<std::size_t>(rng.uniform_index(d - j));
      std::swap(pool[j], pool[k]);
    }
    std::vector<Index> support(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(nnz_per_row));
    std::sort(support.begin(), support.end());
    double z = 0.0;
    for (Index c : support) {
      const double v = rng.normal() / std::sqrt(double(std::max<std::size_t>(nnz_per_row, 1)));
      cols.push_back(c);
      vals.push_back(v);
      z += v * truth[c];
    }
    ptr.push_back(cols.size());
    labels.push_back(rng.uniform01() < 1.0 / (1.0 + std::exp(-2.0 * z)) ? 1.0 : -1.0);
  }
  return Dataset(d, std::move(ptr), std::move(cols), std::move(vals), std::move(labels));
}

}  // namespace nysopt
