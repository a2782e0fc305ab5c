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

// Objective families f(w) = (1/|B|) sum_{i in B} f_i(w) + (lambda/2) ||w||^2
// with analytic gradients and Hessian columns.

#include <cstddef>
#include <span>
#include <string_view>

#include "nysopt/data.hpp"
#include "nysopt/linalg.hpp"

namespace nysopt {

enum class LossKind { logistic, l2svm, quadratic };

std::string_view loss_name(LossKind kind);
LossKind parse_loss_kind(std::string_view name);

using Batch = std::span<const Index>;

inline constexpr std::size_t kDefaultDenseCap = 2000;

class LossModel {
 public:
  LossModel(LossKind kind, double lambda);

  LossKind kind() const { return kind_; }
  double lambda() const { return lambda_; }

  // Same family, different regularizer.
  LossModel with_lambda(double lambda) const { return LossModel(kind_, lambda); }

  double loss(const Dataset& data, Batch batch, const Vector& w) const;
  double loss(const Dataset& data, const Vector& w) const;

  Vector grad(const Dataset& data, Batch batch, const Vector& w) const;
  Vector grad(const Dataset& data, const Vector& w) const;
  // Writes into `out` (resized to d) without reallocating in steady state.
  void grad_into(const Dataset& data, Batch batch, const Vector& w, Vector& out) const;

  // Column j is d(grad)/d(w[omega[j]]) over `sample`, including lambda on the
  // diagonal entry. The squared hinge uses the generalized Hessian, which
  // drops samples sitting exactly on the margin.
  DenseMatrix hessian_columns(const Dataset& data, Batch sample, const Vector& w,
                              std::span<const Index> omega) const;

  // H v over `sample`.
  Vector hessian_vector(const Dataset& data, Batch sample, const Vector& w,
                        const Vector& v) const;

  // Full d x d Hessian over all samples. Refuses d > cap.
  DenseMatrix full_hessian(const Dataset& data, const Vector& w,
                           std::size_t cap = kDefaultDenseCap) const;

  // Per-sample first and second derivatives of the loss w.r.t. the margin
  // z = x_i^T w. Exposed for tests.
  double sample_loss(double z, double y) const;
  double sample_dloss(double z, double y) const;
  double sample_d2loss(double z, double y) const;

 private:
  void check_batch(const Dataset& data, Batch batch, const Vector& w) const;

  LossKind kind_;
  double lambda_;
};

}  // namespace nysopt
