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

// Deterministic helpers around the stochastic engines: initial point,
// reference minimizer, curvature estimates and the step-size check.

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "nysopt/errors.hpp"
#include "nysopt/optimizers.hpp"

namespace nysopt {
namespace {

Vector conjugate_gradient(const LossModel& quad, const Dataset& data, const Vector& rhs,
                          double tol, std::size_t max_iter) {
  const auto all = all_indices(data.n());
  const Vector anchor = Vector::Zero(rhs.size());
  Vector x = Vector::Zero(rhs.size());
  Vector r = rhs;
  Vector p = r;
  double rr = r.squaredNorm();
  const double stop = tol * tol * std::max(rr, 1e-300);
  for (std::size_t it = 0; it < max_iter && rr > stop; ++it) {
    const Vector ap = quad.hessian_vector(data, all, anchor, p);
    const double alpha = rr / p.dot(ap);
    x += alpha * p;
    r -= alpha * ap;
    const double rr_next = r.squaredNorm();
    p = r + (rr_next / rr) * p;
    rr = rr_next;
  }
  return x;
}

}  // namespace

Vector least_squares_init(const Dataset& data, double lambda, std::size_t cap) {
  const LossModel quad(LossKind::quadratic, std::max(lambda, 1e-6));
  const Vector zero = Vector::Zero(static_cast<Eigen::Index>(data.d()));
  const Vector rhs = -quad.grad(data, zero);  // X^T y / n
  if (data.d() <= cap) return spd_solve(quad.full_hessian(data, zero, cap), rhs);
  return conjugate_gradient(quad, data, rhs, 1e-12, 10 * data.d());
}

ReferenceSolution reference_minimizer(const LossModel& model, const Dataset& data, double tol,
                                      std::size_t max_iter, std::size_t cap) {
  const auto all = all_indices(data.n());
  ReferenceSolution out;
  out.method = "damped Newton, full Hessian, Armijo backtracking";
  Vector w = Vector::Zero(static_cast<Eigen::Index>(data.d()));
  double f = model.loss(data, all, w);
  Vector g = model.grad(data, all, w);
  std::size_t stalls = 0;
  std::size_t it = 0;
  for (; it < max_iter && g.norm() > tol; ++it) {
    DenseMatrix h = model.full_hessian(data, w, cap);
    Vector p;
    double shift = 0.0;
    const double scale = std::max(1.0, h.diagonal().cwiseAbs().maxCoeff());
    for (;;) {
      try {
        p = -spd_solve(h, g);
        break;
      } catch (const SingularMatrixError&) {
        const double next = shift == 0.0 ? 1e-12 * scale : shift * 100.0;
        h.diagonal().array() += next - shift;
        shift = next;
        if (shift > scale) throw NumericalError("reference_minimizer: Hessian is not usable");
      }
    }
    const double slope = g.dot(p);
    double step = 1.0;
    bool accepted = false;
    Vector w_try;
    double f_try = 0.0;
    Vector g_try;
    for (int ls = 0; ls < 60; ++ls, step *= 0.5) {
      w_try = w + step * p;
      f_try = model.loss(data, all, w_try);
      if (!std::isfinite(f_try)) continue;
      if (f_try <= f + 1e-4 * step * slope) {
        accepted = true;
        break;
      }
      // Near the optimum f is flat to rounding; a full step that reduces the
      // gradient is accepted on that basis.
      if (step == 1.0 && f_try <= f + 1e-14 * std::max(1.0, std::abs(f))) {
        g_try = model.grad(data, all, w_try);
        if (g_try.norm() < g.norm()) {
          accepted = true;
          break;
        }
      }
    }
    if (!accepted) break;
    if (g_try.size() == 0 || step != 1.0) g_try = model.grad(data, all, w_try);
    stalls = g_try.norm() < g.norm() ? 0 : stalls + 1;
    w = std::move(w_try);
    f = f_try;
    g = std::move(g_try);
    g_try.resize(0);
    if (stalls >= 3) break;
  }
  out.w = std::move(w);
  out.f_star = f;
  out.grad_norm = g.norm();
  out.iterations = it;
  return out;
}

CurvatureEstimate estimate_curvature(const LossModel& model, const Dataset& data, const Vector& w,
                                     std::size_t cap) {
  CurvatureEstimate out;
  if (data.d() <= cap) {
    const DenseMatrix h = model.full_hessian(data, w, cap);
    Eigen::SelfAdjointEigenSolver<DenseMatrix> es(h, Eigen::EigenvaluesOnly);
    out.mu = es.eigenvalues().minCoeff();
    out.Lambda = es.eigenvalues().maxCoeff();
    out.method = "dense eigendecomposition";
    return out;
  }
  const auto all = all_indices(data.n());
  const auto d = static_cast<Eigen::Index>(data.d());
  auto power = [&](double shift) {
    // dominant eigenvalue of (H - shift I)
    Vector x = Vector::Constant(d, 1.0 / std::sqrt(static_cast<double>(d)));
    x(0) += 0.1;
    x.normalize();
    double est = 0.0;
    for (int it = 0; it < 300; ++it) {
      Vector y = model.hessian_vector(data, all, w, x) - shift * x;
      est = x.dot(y);
      const double nrm = y.norm();
      if (nrm == 0.0) break;
      x = y / nrm;
    }
    return est;
  };
  out.Lambda = power(0.0);
  out.mu = out.Lambda + power(out.Lambda);
  out.method = "power iteration on Hessian-vector products";
  return out;
}

AdmissibilityReport check_step_admissibility(double eta, double rho, std::size_t ell, double mu,
                                             double Lambda, double gamma) {
  if (!(eta > 0.0) || !(rho > 0.0) || ell == 0 || !(mu > 0.0) || !(Lambda > 0.0) ||
      !(gamma >= 0.0)) {
    throw ConfigError("check_step_admissibility: estimates must be positive");
  }
  AdmissibilityReport r;
  r.Delta = 1.0 / (gamma + rho);
  r.delta = 1.0 / rho;
  const double l2d2 = Lambda * Lambda * r.delta * r.delta;
  r.eta_bound = mu * r.Delta / (2.0 * l2d2);
  r.step_ok = eta < r.eta_bound;
  if (!r.step_ok) r.violations.push_back("eta < mu*Delta / (2*Lambda^2*delta^2)");

  const double ell_d = static_cast<double>(ell);
  r.ell_lhs = 1.0 / (2.0 * ell_d * eta) + 2.0 * eta * l2d2;
  r.ell_rhs = mu * r.Delta;
  r.ell_ok = r.ell_lhs < r.ell_rhs;
  if (!r.ell_ok) r.violations.push_back("1/(2*ell*eta) + 2*eta*Lambda^2*delta^2 < mu*Delta");

  const double denom = 2.0 * ell_d * eta * (mu * r.Delta - eta * l2d2);
  if (denom > 0.0) {
    r.alpha = (1.0 + 2.0 * ell_d * eta * eta * l2d2) / denom;
    if (!(*r.alpha < 1.0)) r.violations.push_back("alpha < 1");
  } else {
    r.violations.push_back("alpha undefined: eta >= mu*Delta / (Lambda^2*delta^2)");
  }
  r.admissible = r.step_ok && r.ell_ok && r.alpha && *r.alpha < 1.0;
  return r;
}

AdmissibilityReport check_step_admissibility(const OptimizerConfig& config, std::size_t n,
                                             double mu, double Lambda, double gamma) {
  return check_step_admissibility(config.eta, config.rho, config.effective_ell(n), mu, Lambda,
                                  gamma);
}

}  // namespace nysopt
