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

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "nysopt/rng.hpp"

namespace nysopt {

using Index = std::uint32_t;

struct SparseRow {
  std::span<const Index> idx;
  std::span<const double> val;
};

// Immutable CSR dataset with labels in {-1, +1}. Column indices are 0-based
// and strictly increasing within each row.
class Dataset {
 public:
  Dataset() = default;

  // Validates every invariant; throws ConfigError on violation.
  Dataset(std::size_t dim, std::vector<std::size_t> row_ptr, std::vector<Index> cols,
          std::vector<double> vals, std::vector<double> labels);

  std::size_t n() const { return labels_.size(); }
  std::size_t d() const { return dim_; }
  std::size_t nnz() const { return cols_.size(); }

  SparseRow row(std::size_t i) const {
    const std::size_t b = row_ptr_[i], e = row_ptr_[i + 1];
    return {std::span<const Index>(cols_).subspan(b, e - b),
            std::span<const double>(vals_).subspan(b, e - b)};
  }
  double label(std::size_t i) const { return labels_[i]; }
  std::span<const double> labels() const { return labels_; }

  // Same rows with a larger feature dimension.
  Dataset with_dimension(std::size_t dim) const;

  // Rows in the given order (duplicates allowed).
  Dataset subset(std::span<const Index> rows) const;

  // First `count` rows.
  Dataset head(std::size_t count) const;

  // Multiplies column j by scale[j].
  Dataset scaled(std::span<const double> scale) const;

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<Index> cols_;
  std::vector<double> vals_;
  std::vector<double> labels_;
};

// All row indices 0..n-1.
std::vector<Index> all_indices(std::size_t n);

// LIBSVM text: "<label> <index>:<value> ...", 1-based indices, '#' comments.
// Labels 0/1 map to -1/+1; -1/+1 are kept. d is the largest index seen
// unless `dim_override` is given (it must cover every index).
// Throws ParseError carrying the 1-based line number.
Dataset parse_libsvm(std::istream& in, std::optional<std::size_t> dim_override = {});

// Reads a file, transparently decompressing when the name ends in ".gz".
Dataset load_libsvm(const std::filesystem::path& path,
                    std::optional<std::size_t> dim_override = {});

// Shortest round-trip decimal representation of every value.
void write_libsvm(std::ostream& out, const Dataset& data);

// Per-feature 1 / max|x_ij| over the dataset (1 for all-zero columns).
std::vector<double> max_abs_scales(const Dataset& data);

enum class SamplingMode { with_replacement, without_replacement };

// Deterministic mini-batch stream. without_replacement shuffles at the start
// of each pass and emits consecutive chunks; the last chunk of a pass is
// short when batch_size does not divide n, so a pass is always
// ceil(n / batch_size) batches.
class BatchSampler {
 public:
  BatchSampler(std::uint64_t seed, std::size_t batch_size, std::size_t n, SamplingMode mode);

  // Returns a view valid until the next call.
  std::span<const Index> next();

  std::size_t batch_size() const { return batch_size_; }
  std::size_t n() const { return n_; }

 private:
  Rng rng_;
  std::size_t batch_size_;
  std::size_t n_;
  SamplingMode mode_;
  std::vector<Index> perm_;
  std::size_t cursor_ = 0;
  std::vector<Index> out_;
};

// Synthetic stand-in for the LIBSVM "adult" (a9a) benchmark: 123 binary
// features laid out as 14 one-hot groups with the same block sizes, skewed
// category frequencies, a correlated education pair, and labels drawn from a
// logistic model (about a quarter positive).
Dataset make_adult_like(std::size_t n, std::uint64_t seed);

// Gaussian-design generator used for timing and oracle checks: each row has
// `nnz_per_row` nonzeros at distinct uniformly chosen columns.
Dataset make_sparse_gaussian(std::size_t n, std::size_t d, std::size_t nnz_per_row,
                             std::uint64_t seed);

}  // namespace nysopt
