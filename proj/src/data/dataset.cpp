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
#include <numeric>
#include <string>

#include "nysopt/data.hpp"
#include "nysopt/errors.hpp"

namespace nysopt {

Dataset::Dataset(std::size_t dim, std::vector<std::size_t> row_ptr, std::vector<Index> cols,
                 std::vector<double> vals, std::vector<double> labels)
    : dim_(dim),
      row_ptr_(std::move(row_ptr)),
      cols_(std::move(cols)),
      vals_(std::move(vals)),
      labels_(std::move(labels)) {
  if (row_ptr_.size() != labels_.size() + 1 || row_ptr_.front() != 0 ||
      row_ptr_.back() != cols_.size() || cols_.size() != vals_.size()) {
    throw ConfigError("Dataset: inconsistent CSR arrays");
  }
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] != 1.0 && labels_[i] != -1.0) {
      throw ConfigError("Dataset: label of row " + std::to_string(i) + " is not in {-1,+1}");
    }
    if (row_ptr_[i] > row_ptr_[i + 1]) throw ConfigError("Dataset: row pointers decrease");
    for (std::size_t p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) {
      if (cols_[p] >= dim_) {
        throw ConfigError("Dataset: feature index out of range in row " + std::to_string(i));
      }
      if (p > row_ptr_[i] && cols_[p] <= cols_[p - 1]) {
        throw ConfigError("Dataset: indices not strictly increasing in row " +
                          std::to_string(i));
      }
      if (!std::isfinite(vals_[p])) {
        throw ConfigError("Dataset: non-finite value in row " + std::to_string(i));
      }
    }
  }
}

Dataset Dataset::with_dimension(std::size_t dim) const {
  return Dataset(dim, row_ptr_, cols_, vals_, labels_);
}

Dataset Dataset::subset(std::span<const Index> rows) const {
  std::vector<std::size_t> ptr{0};
  std::vector<Index> cols;
  std::vector<double> vals;
  std::vector<double> labels;
  ptr.reserve(rows.size() + 1);
  labels.reserve(rows.size());
  for (Index r : rows) {
    if (r >= n()) throw ConfigError("Dataset::subset: row index out of range");
    const SparseRow x = row(r);
    cols.insert(cols.end(), x.idx.begin(), x.idx.end());
    vals.insert(vals.end(), x.val.begin(), x.val.end());
    ptr.push_back(cols.size());
    labels.push_back(labels_[r]);
  }
  return Dataset(dim_, std::move(ptr), std::move(cols), std::move(vals), std::move(labels));
}

Dataset Dataset::head(std::size_t count) const {
  const auto rows = all_indices(std::min(count, n()));
  return subset(rows);
}

Dataset Dataset::scaled(std::span<const double> scale) const {
  if (scale.size() != dim_) throw ConfigError("Dataset::scaled: scale length must equal d");
  std::vector<double> vals = vals_;
  for (std::size_t p = 0; p < vals.size(); ++p) vals[p] *= scale[cols_[p]];
  return Dataset(dim_, row_ptr_, cols_, std::move(vals), labels_);
}

std::vector<Index> all_indices(std::size_t n) {
  std::vector<Index> idx(n);
  std::iota(idx.begin(), idx.end(), Index{0});
  return idx;
}

std::vector<double> max_abs_scales(const Dataset& data) {
  std::vector<double> mx(data.d(), 0.0);
  for (std::size_t i = 0; i < data.n(); ++i) {
    const SparseRow x = data.row(i);
    for (std::size_t j = 0; j < x.idx.size(); ++j) {
      mx[x.idx[j]] = std::max(mx[x.idx[j]], std::abs(x.val[j]));
    }
  }
  for (double& s : mx) s = s > 0.0 ? 1.0 / s : 1.0;
  return mx;
}

BatchSampler::BatchSampler(std::uint64_t seed, std::size_t batch_size, std::size_t n,
                           SamplingMode mode)
    : rng_(seed), batch_size_(batch_size), n_(n), mode_(mode) {
  if (batch_size == 0) throw ConfigError("BatchSampler: batch_size must be >= 1");
  if (batch_size > n) {
    throw ConfigError("BatchSampler: batch_size " + std::to_string(batch_size) +
                      " exceeds sample count " + std::to_string(n));
  }
  if (mode_ == SamplingMode::without_replacement) {
    perm_ = all_indices(n);
    cursor_ = n;  // forces a shuffle on the first call
  }
  out_.reserve(batch_size);
}

std::span<const Index> BatchSampler::next() {
  out_.clear();
  if (mode_ == SamplingMode::with_replacement) {
    for (std::size_t j = 0; j < batch_size_; ++j) {
      out_.push_back(static_cast<Index>(rng_.uniform_index(n_)));
    }
    return out_;
  }
  if (cursor_ >= n_) {
    rng_.shuffle(std::span<Index>(perm_));
    cursor_ = 0;
  }
  const std::size_t take = std::min(batch_size_, n_ - cursor_);
  out_.assign(perm_.begin() + static_cast<std::ptrdiff_t>(cursor_),
              perm_.begin() + static_cast<std::ptrdiff_t>(cursor_ + take));
  cursor_ += take;
  return out_;
}

}  // namespace nysopt
