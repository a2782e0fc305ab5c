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

// Iteration engines: Nystrom-SGD, Nystrom-SVRG and the plain SGD / SVRG
// baselines, each producing one trace record per epoch of its own clock.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nysopt/data.hpp"
#include "nysopt/linalg.hpp"
#include "nysopt/loss.hpp"

namespace nysopt {

enum class Method { nys_sgd, nys_svrg, sgd, svrg };
enum class InitPolicy { zeros, least_squares, given };
// `random` picks the snapshot uniformly among the inner iterates; `last`
// keeps the final inner iterate (a common practical variant).
enum class OuterIterate { random, last };

std::string_view method_name(Method m);
Method parse_method(std::string_view name);
std::string_view init_name(InitPolicy p);
InitPolicy parse_init(std::string_view name);
bool is_svrg_family(Method m);
bool uses_factor(Method m);

struct OptimizerConfig {
  Method method = Method::nys_svrg;
  double eta = 1.0;
  double rho = 0.1;
  double lambda = 0.0;  // informational; the LossModel owns the regularizer
  std::size_t m = 50;
  std::optional<std::size_t> k_max;  // 0 forces the k = 0 factor
  std::optional<double> clamp;       // defaults to 1e-10 * m
  std::size_t ell = 0;               // 0 = ceil(n / batch_size)
  std::size_t batch_size = 128;
  std::size_t epochs = 20;
  std::uint64_t seed = 1;
  std::size_t hessian_sample = 0;  // 0 = all training rows
  InitPolicy init = InitPolicy::zeros;
  Vector initial_w;  // used with InitPolicy::given
  SamplingMode sampling = SamplingMode::with_replacement;
  OuterIterate outer = OuterIterate::random;
  std::optional<double> f_star;  // enables opt_error
  double divergence_factor = 1e3;

  // Throws ConfigError describing the first invalid field.
  void validate(std::size_t n, std::size_t d) const;
  std::size_t effective_ell(std::size_t n) const;
};

struct TraceRecord {
  std::size_t epoch = 0;
  std::size_t iterations = 0;  // cumulative inner iterations
  double wall_time_s = 0.0;    // cumulative
  double train_loss = 0.0;
  std::optional<double> opt_error;
  std::optional<double> test_error_rate;
  double grad_norm = 0.0;
  std::size_t factor_rank = 0;
  double factor_build_time_s = 0.0;  // spent in this epoch
};

enum class RunStatus { ok, diverged };

struct RunResult {
  std::vector<TraceRecord> trace;
  Vector w;  // final iterate (outer snapshot for SVRG-style methods)
  RunStatus status = RunStatus::ok;
  std::size_t diverged_at_iteration = 0;
  std::string message;
  // "iterations" (SGD-style: ceil(n/b) steps per epoch) or "outer" (SVRG-style: ell steps)
  std::string clock;
};

RunResult run_nys_sgd(const OptimizerConfig& config, const LossModel& model, const Dataset& train,
                      const Dataset* test = nullptr);
RunResult run_nys_svrg(const OptimizerConfig& config, const LossModel& model, const Dataset& train,
                       const Dataset* test = nullptr);
RunResult run_baseline(const OptimizerConfig& config, const LossModel& model, const Dataset& train,
                       const Dataset* test = nullptr);
// Dispatches on config.method.
RunResult run_method(const OptimizerConfig& config, const LossModel& model, const Dataset& train,
                     const Dataset* test = nullptr);

// Misclassification rate of sign(x^T w), with sign(0) = +1.
double error_rate(const Dataset& data, const Vector& w);

// Ridge least squares on the +-1 labels: (X^T X / n + reg I) w = X^T y / n,
// reg = max(lambda, 1e-6). Direct solve for d <= cap, conjugate gradients above.
Vector least_squares_init(const Dataset& data, double lambda, std::size_t cap = kDefaultDenseCap);

struct ReferenceSolution {
  Vector w;
  double f_star = 0.0;
  double grad_norm = 0.0;
  std::size_t iterations = 0;
  std::string method;
};

// Damped Newton with the full Hessian and Armijo backtracking, run until the
// gradient norm drops below `tol` or stops improving. d <= cap only.
ReferenceSolution reference_minimizer(const LossModel& model, const Dataset& data,
                                      double tol = 1e-12, std::size_t max_iter = 100,
                                      std::size_t cap = kDefaultDenseCap);

struct CurvatureEstimate {
  double mu = 0.0;      // smallest Hessian eigenvalue
  double Lambda = 0.0;  // largest Hessian eigenvalue
  std::string method;
};

// Extreme eigenvalues of the Hessian at w: dense for d <= cap, otherwise
// power iteration on Hessian-vector products.
CurvatureEstimate estimate_curvature(const LossModel& model, const Dataset& data, const Vector& w,
                                     std::size_t cap = kDefaultDenseCap);

struct AdmissibilityReport {
  double Delta = 0.0;  // 1 / (Gamma + rho)
  double delta = 0.0;  // 1 / rho
  double eta_bound = 0.0;  // mu Delta / (2 Lambda^2 delta^2)
  bool step_ok = false;    // eta < eta_bound
  double ell_lhs = 0.0;    // 1/(2 ell eta) + 2 eta Lambda^2 delta^2
  double ell_rhs = 0.0;    // mu Delta
  bool ell_ok = false;     // ell_lhs < ell_rhs
  std::optional<double> alpha;  // contraction factor; empty if the denominator is <= 0
  bool admissible = false;      // step_ok && ell_ok && alpha < 1
  std::vector<std::string> violations;
};

// Checks the step-size and inner-loop-length conditions for linear
// convergence of Nystrom-SVRG given curvature estimates mu, Lambda and
// gamma = lambda_max(Z Z^T).
AdmissibilityReport check_step_admissibility(double eta, double rho, std::size_t ell, double mu,
                                             double Lambda, double gamma);
AdmissibilityReport check_step_admissibility(const OptimizerConfig& config, std::size_t n,
                                             double mu, double Lambda, double gamma);

// v = grad_B(w) - grad_B(w_snap) + g_snap, the variance-reduced direction of
// the SVRG inner loop. `scratch` receives grad_B(w_snap).
void variance_reduced_gradient(const LossModel& model, const Dataset& data, Batch batch,
                               const Vector& w, const Vector& w_snap, const Vector& g_snap,
                               Vector& out, Vector& scratch);

}  // namespace nysopt
