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

#include "nysopt/loss.hpp"

#include <cmath>
#include <string>

#include "nysopt/errors.hpp"
#include "nysopt/kernels.hpp"

namespace nysopt {
namespace {

// log(1 + exp(z)) without overflow.
double softplus(double z) { return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double margin(const SparseRow& x, const Vector& w) {
  return kernels::sparse_dot(x.idx, x.val, as_span(w));
}

}  // namespace

std::string_view loss_name(LossKind kind) {
  switch (kind) {
    case LossKind::logistic:
      return "logistic";
    case LossKind::l2svm:
      return "l2svm";
    case LossKind::quadratic:
      return "quadratic";
  }
  return "unknown";
}

LossKind parse_loss_kind(std::string_view name) {
  if (name == "logistic") return LossKind::logistic;
  if (name == "l2svm") return LossKind::l2svm;
  if (name == "quadratic") return LossKind::quadratic;
  throw ConfigError("unknown loss '" + std::string(name) + "'");
}

LossModel::LossModel(LossKind kind, double lambda) : kind_(kind), lambda_(lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw ConfigError("LossModel: lambda must be finite and >= 0");
  }
}

double LossModel::sample_loss(double z, double y) const {
  switch (kind_) {
    case LossKind::logistic:
      return softplus(-y * z);
    case LossKind::l2svm: {
      const double h = 1.0 - y * z;
      return h > 0.0 ? h * h : 0.0;
    }
    case LossKind::quadratic:
      return 0.5 * (z - y) * (z - y);
  }
  return 0.0;
}

double LossModel::sample_dloss(double z, double y) const {
  switch (kind_) {
    case LossKind::logistic:
      return -y * sigmoid(-y * z);
    case LossKind::l2svm: {
      const double h = 1.0 - y * z;
      return h > 0.0 ? -2.0 * y * h : 0.0;
    }
    case LossKind::quadratic:
      return z - y;
  }
  return 0.0;
}

double LossModel::sample_d2loss(double z, double y) const {
  switch (kind_) {
    case LossKind::logistic: {
      const double s = sigmoid(z);
      return s * (1.0 - s);
    }
    case LossKind::l2svm:
      return y * z < 1.0 ? 2.0 : 0.0;
    case LossKind::quadratic:
      return 1.0;
  }
  return 0.0;
}

void LossModel::check_batch(const Dataset& data, Batch batch, const Vector& w) const {
  if (static_cast<std::size_t>(w.size()) != data.d()) {
    throw ConfigError("weight length " + std::to_string(w.size()) + " != feature dimension " +
                      std::to_string(data.d()));
  }
  if (batch.empty()) throw ConfigError("empty batch");
  for (Index i : batch) {
    if (i >= data.n()) throw ConfigError("batch index " + std::to_string(i) + " out of range");
  }
}

double LossModel::loss(const Dataset& data, Batch batch, const Vector& w) const {
  check_batch(data, batch, w);
  double acc = 0.0;
  for (Index i : batch) acc += sample_loss(margin(data.row(i), w), data.label(i));
  return acc / static_cast<double>(batch.size()) + 0.5 * lambda_ * w.squaredNorm();
}

double LossModel::loss(const Dataset& data, const Vector& w) const {
  const auto all = all_indices(data.n());
  return loss(data, all, w);
}

void LossModel::grad_into(const Dataset& data, Batch batch, const Vector& w, Vector& out) const {
  check_batch(data, batch, w);
  out.resize(w.size());
  kernels::scale_into(lambda_, as_span(w), as_span(out));
  const double inv = 1.0 / static_cast<double>(batch.size());
  for (Index i : batch) {
    const SparseRow x = data.row(i);
    const double g = sample_dloss(margin(x, w), data.label(i));
    if (g != 0.0) kernels::sparse_axpy(g * inv, x.idx, x.val, as_span(out));
  }
}

Vector LossModel::grad(const Dataset& data, Batch batch, const Vector& w) const {
  Vector out;
  grad_into(data, batch, w, out);
  return out;
}

Vector LossModel::grad(const Dataset& data, const Vector& w) const {
  const auto all = all_indices(data.n());
  return grad(data, all, w);
}

DenseMatrix LossModel::hessian_columns(const Dataset& data, Batch sample, const Vector& w,
                                       std::span<const Index> omega) const {
  check_batch(data, sample, w);
  const std::size_t d = data.d();
  // position of each sampled coordinate in omega, or -1
  std::vector<std::ptrdiff_t> slot(d, -1);
  for (std::size_t j = 0; j < omega.size(); ++j) {
    if (omega[j] >= d) throw ConfigError("hessian_columns: column index out of range");
    if (slot[omega[j]] >= 0) throw ConfigError("hessian_columns: duplicate column index");
    slot[omega[j]] = static_cast<std::ptrdiff_t>(j);
  }

  DenseMatrix c = DenseMatrix::Zero(static_cast<Eigen::Index>(d),
                                    static_cast<Eigen::Index>(omega.size()));
  const double inv = 1.0 / static_cast<double>(sample.size());
  for (Index i : sample) {
    const SparseRow x = data.row(i);
    const double s = sample_d2loss(margin(x, w), data.label(i));
    if (s == 0.0) continue;
    for (std::size_t p = 0; p < x.idx.size(); ++p) {
      const std::ptrdiff_t j = slot[x.idx[p]];
      if (j < 0) continue;
      kernels::sparse_axpy(s * x.val[p] * inv, x.idx, x.val, column(c, j));
    }
  }
  for (std::size_t j = 0; j < omega.size(); ++j) {
    c(omega[j], static_cast<Eigen::Index>(j)) += lambda_;
  }
  return c;
}

Vector LossModel::hessian_vector(const Dataset& data, Batch sample, const Vector& w,
                                 const Vector& v) const {
  check_batch(data, sample, w);
  Vector out(w.size());
  kernels::scale_into(lambda_, as_span(v), as_span(out));
  const double inv = 1.0 / static_cast<double>(sample.size());
  for (Index i : sample) {
    const SparseRow x = data.row(i);
    const double s = sample_d2loss(margin(x, w), data.label(i));
    if (s == 0.0) continue;
    const double xv = kernels::sparse_dot(x.idx, x.val, as_span(v));
    kernels::sparse_axpy(s * xv * inv, x.idx, x.val, as_span(out));
  }
  return out;
}

DenseMatrix LossModel::full_hessian(const Dataset& data, const Vector& w, std::size_t cap) const {
  if (data.d() > cap) {
    throw ConfigError("full_hessian: d = " + std::to_string(data.d()) +
                      " exceeds the dense cap " + std::to_string(cap));
  }
  const auto all = all_indices(data.n());
  const auto cols = all_indices(data.d());
  return hessian_columns(data, all, w, cols);
}

}  // namespace nysopt
