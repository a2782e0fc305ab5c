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

#include "nysopt/optimizers.hpp"

#include <chrono>
#include <cmath>
#include <string>

#include "nysopt/errors.hpp"
#include "nysopt/kernels.hpp"
#include "nysopt/nystrom.hpp"
#include "nysopt/rng.hpp"

namespace nysopt {

std::string_view method_name(Method m) {
  switch (m) {
    case Method::nys_sgd:
      return "nys_sgd";
    case Method::nys_svrg:
      return "nys_svrg";
    case Method::sgd:
      return "sgd";
    case Method::svrg:
      return "svrg";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  if (name == "nys_sgd") return Method::nys_sgd;
  if (name == "nys_svrg") return Method::nys_svrg;
  if (name == "sgd") return Method::sgd;
  if (name == "svrg") return Method::svrg;
  throw ConfigError("unknown method '" + std::string(name) + "'");
}

std::string_view init_name(InitPolicy p) {
  switch (p) {
    case InitPolicy::zeros:
      return "zeros";
    case InitPolicy::least_squares:
      return "least_squares";
    case InitPolicy::given:
      return "given";
  }
  return "unknown";
}

InitPolicy parse_init(std::string_view name) {
  if (name == "zeros") return InitPolicy::zeros;
  if (name == "least_squares") return InitPolicy::least_squares;
  if (name == "given") return InitPolicy::given;
  throw ConfigError("unknown init policy '" + std::string(name) + "'");
}

bool is_svrg_family(Method m) { return m == Method::nys_svrg || m == Method::svrg; }
bool uses_factor(Method m) { return m == Method::nys_sgd || m == Method::nys_svrg; }

std::size_t OptimizerConfig::effective_ell(std::size_t n) const {
  return ell > 0 ? ell : (n + batch_size - 1) / batch_size;
}

void OptimizerConfig::validate(std::size_t n, std::size_t d) const {
  if (!(eta > 0.0) || !std::isfinite(eta)) throw ConfigError("eta must be > 0");
  if (!(rho > 0.0) || !std::isfinite(rho)) throw ConfigError("rho must be > 0");
  if (!(lambda >= 0.0)) throw ConfigError("lambda must be >= 0");
  if (batch_size == 0) throw ConfigError("batch_size must be >= 1");
  if (batch_size > n) {
    throw ConfigError("batch_size " + std::to_string(batch_size) + " exceeds n = " +
                      std::to_string(n));
  }
  if (uses_factor(method) && (m == 0 || m > d)) {
    throw ConfigError("m must satisfy 1 <= m <= d (m = " + std::to_string(m) +
                      ", d = " + std::to_string(d) + ")");
  }
  if (hessian_sample > n) throw ConfigError("hessian_sample exceeds n");
  if (init == InitPolicy::given && static_cast<std::size_t>(initial_w.size()) != d) {
    throw ConfigError("initial_w length does not match d");
  }
  if (!(divergence_factor > 1.0)) throw ConfigError("divergence_factor must be > 1");
  if (clamp && !(*clamp >= 0.0)) throw ConfigError("clamp must be >= 0");
}

double error_rate(const Dataset& data, const Vector& w) {
  if (data.n() == 0) return 0.0;
  std::size_t wrong = 0;
  for (std::size_t i = 0; i < data.n(); ++i) {
    const SparseRow x = data.row(i);
    const double z = kernels::sparse_dot(x.idx, x.val, as_span(w));
    const double pred = z >= 0.0 ? 1.0 : -1.0;
    if (pred != data.label(i)) ++wrong;
  }
  return static_cast<double>(wrong) / static_cast<double>(data.n());
}

void variance_reduced_gradient(const LossModel& model, const Dataset& data, Batch batch,
                               const Vector& w, const Vector& w_snap, const Vector& g_snap,
                               Vector& out, Vector& scratch) {
  model.grad_into(data, batch, w, out);
  model.grad_into(data, batch, w_snap, scratch);
  out -= scratch;
  out += g_snap;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// State shared by all four engines: initial point, evaluation, divergence
// guard and the Nystrom factor refresh.
class Engine {
 public:
  Engine(const OptimizerConfig& config, const LossModel& model, const Dataset& train,
         const Dataset* test)
      : cfg_(config),
        model_(model),
        train_(train),
        test_(test),
        all_(all_indices(train.n())),
        columns_rng_(config.seed, Stream::columns),
        hessian_rng_(config.seed, Stream::hessian_sample) {
    cfg_.validate(train.n(), train.d());
    if (test_ != nullptr && test_->d() != train.d()) {
      throw ConfigError("train and test feature dimensions differ");
    }
    switch (cfg_.init) {
      case InitPolicy::zeros:
        w0_ = Vector::Zero(static_cast<Eigen::Index>(train.d()));
        break;
      case InitPolicy::least_squares:
        w0_ = least_squares_init(train, model.lambda());
        break;
      case InitPolicy::given:
        w0_ = cfg_.initial_w;
        break;
    }
    factor_.z.resize(static_cast<Eigen::Index>(train.d()), 0);
    factor_.q.resize(static_cast<Eigen::Index>(train.d()), 0);
    factor_.rho = cfg_.rho;
  }

  const Vector& w0() const { return w0_; }
  const std::vector<Index>& all() const { return all_; }

  TraceRecord evaluate(std::size_t epoch, std::size_t iterations, double wall,
                       const Vector& w) const {
    TraceRecord r;
    r.epoch = epoch;
    r.iterations = iterations;
    r.wall_time_s = wall;
    r.train_loss = model_.loss(train_, all_, w);
    if (cfg_.f_star) r.opt_error = r.train_loss - *cfg_.f_star;
    if (test_ != nullptr && test_->n() > 0) r.test_error_rate = error_rate(*test_, w);
    r.grad_norm = model_.grad(train_, all_, w).norm();
    r.factor_rank = factor_.rank();
    return r;
  }

  // True when the run must stop; fills the result accordingly.
  bool diverged(const TraceRecord& r, double initial_loss, std::size_t iteration,
                RunResult& out) const {
    const bool bad = !std::isfinite(r.train_loss) || !std::isfinite(r.grad_norm) ||
                     (initial_loss > 0.0 && r.train_loss > cfg_.divergence_factor * initial_loss);
    if (!bad) return false;
    out.status = RunStatus::diverged;
    out.diverged_at_iteration = iteration;
    out.message = std::string(method_name(cfg_.method)) + " diverged at iteration " +
                  std::to_string(iteration) + " (eta=" + std::to_string(cfg_.eta) +
                  ", rho=" + std::to_string(cfg_.rho) + ", train_loss=" +
                  std::to_string(r.train_loss) + ")";
    return true;
  }

  // Rebuilds the factor at w; returns the build time in seconds.
  double refresh_factor(const Vector& w) {
    const auto t0 = Clock::now();
    const auto omega = sample_columns(train_.d(), cfg_.m, columns_rng_);
    std::vector<Index> rows;
    Batch sample = all_;
    if (cfg_.hessian_sample > 0 && cfg_.hessian_sample < train_.n()) {
      rows = sample_columns(train_.n(), cfg_.hessian_sample, hessian_rng_);
      sample = rows;
    }
    const DenseMatrix c = model_.hessian_columns(train_, sample, w, omega);
    const std::size_t epoch = factor_.epoch + 1;
    factor_ = build_factor(c, omega, cfg_.rho, cfg_.k_max, cfg_.clamp);
    factor_.epoch = epoch;
    return seconds_since(t0);
  }

  // w -= eta * B v (B = (N + rho I)^{-1} or the identity).
  void step(Vector& w, const Vector& v, bool precondition) {
    if (precondition) {
      dir_.resize(v.size());
      apply_inverse_into(factor_, as_span(v), as_span(dir_), scratch_);
      kernels::axpy(-cfg_.eta, as_span(dir_), as_span(w));
    } else {
      kernels::axpy(-cfg_.eta, as_span(v), as_span(w));
    }
  }

  const NystromFactor& factor() const { return factor_; }

 private:
  const OptimizerConfig& cfg_;
  const LossModel& model_;
  const Dataset& train_;
  const Dataset* test_;
  std::vector<Index> all_;
  Vector w0_;
  Rng columns_rng_;
  Rng hessian_rng_;
  NystromFactor factor_;
  Vector dir_;
  Vector scratch_;
};

RunResult run_sgd_style(const OptimizerConfig& cfg, const LossModel& model, const Dataset& train,
                        const Dataset* test, bool precondition) {
  Engine eng(cfg, model, train, test);
  RunResult out;
  out.clock = "iterations";
  Vector w = eng.w0();
  BatchSampler sampler(derive_seed(cfg.seed, static_cast<std::uint64_t>(Stream::batches)),
                       cfg.batch_size, train.n(), cfg.sampling);
  const std::size_t per_epoch = (train.n() + cfg.batch_size - 1) / cfg.batch_size;
  const std::size_t ell = cfg.effective_ell(train.n());

  out.trace.push_back(eng.evaluate(0, 0, 0.0, w));
  const double initial_loss = out.trace.front().train_loss;
  Vector v;
  std::size_t t = 0;
  double wall = 0.0;
  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    const auto t0 = Clock::now();
    double build = 0.0;
    for (std::size_t it = 0; it < per_epoch; ++it, ++t) {
      const Batch batch = sampler.next();
      model.grad_into(train, batch, w, v);
      if (precondition && t % ell == 0) build += eng.refresh_factor(w);
      eng.step(w, v, precondition);
    }
    wall += seconds_since(t0);
    TraceRecord r = eng.evaluate(epoch, t, wall, w);
    r.factor_build_time_s = build;
    if (eng.diverged(r, initial_loss, t, out)) break;
    out.trace.push_back(r);
  }
  out.w = std::move(w);
  return out;
}

RunResult run_svrg_style(const OptimizerConfig& cfg, const LossModel& model, const Dataset& train,
                         const Dataset* test, bool precondition) {
  Engine eng(cfg, model, train, test);
  RunResult out;
  out.clock = "outer";
  BatchSampler sampler(derive_seed(cfg.seed, static_cast<std::uint64_t>(Stream::batches)),
                       cfg.batch_size, train.n(), cfg.sampling);
  Rng outer_rng(cfg.seed, Stream::outer_iterate);
  const std::size_t ell = cfg.effective_ell(train.n());

  Vector snap = eng.w0();
  out.trace.push_back(eng.evaluate(0, 0, 0.0, snap));
  const double initial_loss = out.trace.front().train_loss;
  Vector w, g_snap, v, scratch, chosen;
  std::size_t t_total = 0;
  double wall = 0.0;
  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    const auto t0 = Clock::now();
    g_snap = model.grad(train, eng.all(), snap);
    double build = 0.0;
    if (precondition) build = eng.refresh_factor(snap);
    w = snap;
    const std::size_t pick = cfg.outer == OuterIterate::random
                                 ? 1 + static_cast<std::size_t>(outer_rng.uniform_index(ell))
                                 : ell;
    for (std::size_t t = 1; t <= ell; ++t, ++t_total) {
      const Batch batch = sampler.next();
      variance_reduced_gradient(model, train, batch, w, snap, g_snap, v, scratch);
      eng.step(w, v, precondition);
      if (t == pick) chosen = w;
    }
    snap = chosen;
    wall += seconds_since(t0);
    TraceRecord r = eng.evaluate(epoch, t_total, wall, snap);
    r.factor_build_time_s = build;
    if (eng.diverged(r, initial_loss, t_total, out)) break;
    out.trace.push_back(r);
  }
  out.w = std::move(snap);
  return out;
}

void require_method(const OptimizerConfig& cfg, std::initializer_list<Method> allowed,
                    const char* who) {
  for (Method m : allowed) {
    if (cfg.method == m) return;
  }
  throw ConfigError(std::string(who) + ": unsupported method '" +
                    std::string(method_name(cfg.method)) + "'");
}

}  // namespace

RunResult run_nys_sgd(const OptimizerConfig& config, const LossModel& model, const Dataset& train,
                      const Dataset* test) {
  require_method(config, {Method::nys_sgd}, "run_nys_sgd");
  return run_sgd_style(config, model, train, test, true);
}

RunResult run_nys_svrg(const OptimizerConfig& config, const LossModel& model, const Dataset& train,
                       const Dataset* test) {
  require_method(config, {Method::nys_svrg}, "run_nys_svrg");
  return run_svrg_style(config, model, train, test, true);
}

RunResult run_baseline(const OptimizerConfig& config, const LossModel& model, const Dataset& train,
                       const Dataset* test) {
  require_method(config, {Method::sgd, Method::svrg}, "run_baseline");
  return config.method == Method::sgd ? run_sgd_style(config, model, train, test, false)
                                      : run_svrg_style(config, model, train, test, false);
}

RunResult run_method(const OptimizerConfig& config, const LossModel& model, const Dataset& train,
                     const Dataset* test) {
  switch (config.method) {
    case Method::nys_sgd:
      return run_nys_sgd(config, model, train, test);
    case Method::nys_svrg:
      return run_nys_svrg(config, model, train, test);
    case Method::sgd:
    case Method::svrg:
      return run_baseline(config, model, train, test);
  }
  throw ConfigError("unknown method");
}

}  // namespace nysopt
