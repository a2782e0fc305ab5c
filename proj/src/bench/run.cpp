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
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "nysopt/bench.hpp"
#include "nysopt/errors.hpp"
#include "nysopt/rng.hpp"

namespace nysopt::bench {
namespace {

std::string opt(const std::optional<double>& x) { return x ? format_double(*x) : ""; }

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());
}

// Lowest training loss seen anywhere in a group of traces, less a small margin
// so that opt_error stays positive.
double best_seen(const std::vector<const CellOutcome*>& cells) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto* c : cells) {
    for (const auto& r : c->result.trace) {
      if (std::isfinite(r.train_loss)) best = std::min(best, r.train_loss);
    }
  }
  return best - 1e-12 * std::max(1.0, std::abs(best));
}

}  // namespace

LoadedData load_data(const ExperimentConfig& config) {
  std::optional<std::size_t> dim;
  if (config.dimension > 0) dim = config.dimension;
  LoadedData out{load_libsvm(config.train, dim), std::nullopt};
  if (config.train_rows > 0 && config.train_rows < out.train.n()) {
    out.train = out.train.head(config.train_rows);
  }
  if (config.test) out.test = load_libsvm(*config.test, dim);
  if (out.test && out.test->d() != out.train.d()) {
    const std::size_t d = std::max(out.test->d(), out.train.d());
    out.train = out.train.with_dimension(d);
    out.test = out.test->with_dimension(d);
  }
  if (config.normalize) {
    const auto scales = max_abs_scales(out.train);
    out.train = out.train.scaled(scales);
    if (out.test) out.test = out.test->scaled(scales);
  }
  return out;
}

std::vector<CellSpec> enumerate_cells(const ExperimentConfig& config) {
  std::vector<CellSpec> cells;
  for (double lambda : config.lambda_grid) {
    for (Method method : config.methods) {
      const std::vector<double> rhos = uses_factor(method) ? config.rho_grid : std::vector{1.0};
      for (double eta : config.eta_grid) {
        for (double rho : rhos) {
          for (std::size_t rep = 0; rep < config.seeds; ++rep) {
            CellSpec c;
            c.index = cells.size();
            c.method = method;
            c.lambda = lambda;
            c.eta = eta;
            c.rho = rho;
            c.replicate = rep;
            c.seed = derive_seed(config.seed, c.index);
            c.id = std::string(method_name(method)) + "_lam" + format_double(lambda) + "_eta" +
                   format_double(eta) + (uses_factor(method) ? "_rho" + format_double(rho) : "") +
                   "_r" + std::to_string(rep);
            cells.push_back(std::move(c));
          }
        }
      }
    }
  }
  return cells;
}

OptimizerConfig optimizer_config(const ExperimentConfig& config, const CellSpec& cell) {
  OptimizerConfig o;
  o.method = cell.method;
  o.eta = cell.eta;
  o.rho = cell.rho;
  o.lambda = cell.lambda;
  o.m = config.m;
  o.k_max = config.k_max;
  o.ell = config.ell;
  o.batch_size = config.batch_size;
  o.epochs = config.epochs;
  o.seed = cell.seed;
  o.hessian_sample = config.hessian_sample;
  o.init = config.init;
  o.sampling = config.sampling;
  o.outer = config.outer;
  return o;
}

std::string trace_csv(const CellOutcome& cell, const std::string& config_hash) {
  std::ostringstream os;
  os << "epoch,wall_time_s,train_loss,opt_error,test_error_rate,grad_norm,factor_rank,"
        "factor_build_time_s,iterations,clock,status,config_hash,cell_id\n";
  const auto& res = cell.result;
  for (const auto& r : res.trace) {
    os << r.epoch << ',' << format_double(r.wall_time_s) << ',' << format_double(r.train_loss)
       << ',' << opt(r.opt_error) << ',' << opt(r.test_error_rate) << ','
       << format_double(r.grad_norm) << ',' << r.factor_rank << ','
       << format_double(r.factor_build_time_s) << ',' << r.iterations << ',' << res.clock
       << ",ok," << config_hash << ',' << cell.spec.id << '\n';
  }
  if (res.status == RunStatus::diverged) {
    const std::size_t epoch = res.trace.empty() ? 0 : res.trace.back().epoch + 1;
    const double wall = res.trace.empty() ? 0.0 : res.trace.back().wall_time_s;
    os << epoch << ',' << format_double(wall) << ",,,,,,," << res.diverged_at_iteration << ','
       << res.clock << ",diverged," << config_hash << ',' << cell.spec.id << '\n';
  }
  return os.str();
}

nlohmann::json RunSummary::to_json() const {
  nlohmann::json j;
  j["config_hash"] = config_hash;
  j["total_wall_time_s"] = total_wall_time_s;
  j["all_completed"] = all_completed;
  j["references"] = nlohmann::json::array();
  for (const auto& r : references) {
    j["references"].push_back(
        {{"lambda", r.lambda}, {"f_star", r.f_star}, {"method", r.method},
         {"grad_norm", r.grad_norm}});
  }

  // Best (eta, rho) per (lambda, method): smallest mean final opt_error over replicates.
  struct Acc {
    double sum = 0.0;
    std::size_t count = 0;
    bool any_diverged = false;
  };
  std::map<std::tuple<double, std::string, double, double>, Acc> groups;
  j["cells"] = nlohmann::json::array();
  for (const auto& c : cells) {
    nlohmann::json cj{{"id", c.spec.id},
                      {"method", std::string(method_name(c.spec.method))},
                      {"lambda", c.spec.lambda},
                      {"eta", c.spec.eta},
                      {"rho", c.spec.rho},
                      {"replicate", c.spec.replicate},
                      {"seed", c.spec.seed},
                      {"csv", c.csv.filename().string()}};
    if (c.failed) {
      cj["status"] = "failed";
      cj["error"] = c.error;
    } else {
      cj["status"] = c.result.status == RunStatus::ok ? "ok" : "diverged";
      if (!c.result.trace.empty()) {
        const auto& last = c.result.trace.back();
        cj["final_train_loss"] = last.train_loss;
        if (last.opt_error) cj["final_opt_error"] = *last.opt_error;
        if (last.test_error_rate) cj["final_test_error_rate"] = *last.test_error_rate;
      }
    }
    j["cells"].push_back(cj);

    auto& acc = groups[{c.spec.lambda, std::string(method_name(c.spec.method)), c.spec.eta,
                        c.spec.rho}];
    if (c.failed || c.result.status != RunStatus::ok || c.result.trace.empty() ||
        !c.result.trace.back().opt_error) {
      acc.any_diverged = true;
    } else {
      acc.sum += *c.result.trace.back().opt_error;
      ++acc.count;
    }
  }
  std::map<std::pair<double, std::string>, std::pair<double, nlohmann::json>> best;
  for (const auto& [key, acc] : groups) {
    if (acc.any_diverged || acc.count == 0) continue;
    const auto& [lambda, method, eta, rho] = key;
    const double mean = acc.sum / static_cast<double>(acc.count);
    auto it = best.find({lambda, method});
    if (it == best.end() || mean < it->second.first) {
      best[{lambda, method}] = {mean,
                                {{"lambda", lambda},
                                 {"method", method},
                                 {"eta", eta},
                                 {"rho", rho},
                                 {"mean_final_opt_error", mean}}};
    }
  }
  j["best"] = nlohmann::json::array();
  for (const auto& [key, value] : best) j["best"].push_back(value.second);
  return j;
}

RunSummary run_experiment(const ExperimentConfig& config, std::ostream* log) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  const LoadedData data = load_data(config);
  const Dataset* test = data.test ? &*data.test : nullptr;
  ensure_dir(config.output_dir);

  RunSummary summary;
  summary.config_hash = config.hash();

  // Reference optimum per lambda.
  std::map<double, std::optional<double>> f_star;
  for (double lambda : config.lambda_grid) {
    if (data.train.d() <= config.dense_cap) {
      const LossModel model(config.loss, lambda);
      const auto ref = reference_minimizer(model, data.train, 1e-12, 100, config.dense_cap);
      f_star[lambda] = ref.f_star;
      summary.references.push_back({lambda, ref.f_star, ref.method, ref.grad_norm});
      if (log) {
        *log << "reference lambda=" << format_double(lambda) << " f*=" << format_double(ref.f_star)
             << " |g|=" << format_double(ref.grad_norm) << '\n';
      }
    } else {
      f_star[lambda] = std::nullopt;
    }
  }

  const auto specs = enumerate_cells(config);
  summary.cells.resize(specs.size());
  std::atomic<std::size_t> next{0};
  std::mutex log_mu;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= specs.size()) return;
      CellOutcome& out = summary.cells[i];
      out.spec = specs[i];
      out.csv = config.output_dir / (specs[i].id + ".csv");
      try {
        OptimizerConfig oc = optimizer_config(config, specs[i]);
        oc.f_star = f_star[specs[i].lambda];
        const LossModel model(config.loss, specs[i].lambda);
        out.result = run_method(oc, model, data.train, test);
      } catch (const std::exception& e) {
        out.failed = true;
        out.error = e.what();
      }
      if (log) {
        std::lock_guard lock(log_mu);
        *log << "[" << (i + 1) << "/" << specs.size() << "] " << specs[i].id << ": "
             << (out.failed ? "failed: " + out.error
                 : out.result.status == RunStatus::ok ? "ok"
                                                      : "diverged")
             << '\n';
      }
    }
  };
  const std::size_t nthreads = std::min(config.workers, std::max<std::size_t>(specs.size(), 1));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < nthreads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  // Without an exact reference, measure against the best loss seen per lambda.
  for (double lambda : config.lambda_grid) {
    if (f_star[lambda]) continue;
    std::vector<const CellOutcome*> group;
    for (const auto& c : summary.cells) {
      if (!c.failed && c.spec.lambda == lambda) group.push_back(&c);
    }
    const double fs = best_seen(group);
    if (!std::isfinite(fs)) continue;
    summary.references.push_back({lambda, fs, "best training loss seen across cells", 0.0});
    for (auto& c : summary.cells) {
      if (c.failed || c.spec.lambda != lambda) continue;
      for (auto& r : c.result.trace) r.opt_error = r.train_loss - fs;
    }
  }

  for (const auto& c : summary.cells) {
    if (c.failed) {
      summary.all_completed = false;
      continue;
    }
    write_file(c.csv, trace_csv(c, summary.config_hash));
  }
  summary.total_wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_file(config.output_dir / "summary.json", summary.to_json().dump(2) + "\n");
  return summary;
}

DiagnosticsSummary run_diagnostics(const ExperimentConfig& config, std::ostream* log) {
  config.validate();
  const LoadedData data = load_data(config);
  const Dataset& train = data.train;
  ensure_dir(config.output_dir);

  DiagnosticsSummary out;
  out.config_hash = config.hash();
  out.lambdas = config.diag_lambda_grid;
  out.sweep_csv = config.output_dir / "quality_sweep.csv";
  out.closeness_csv = config.output_dir / "newton_closeness.csv";
  out.effective_dim_csv = config.output_dir / "effective_dimension.csv";

  std::ostringstream sweep, close, deff;
  sweep << "lambda,m,seed,k,rel_error_fro,rel_error_spec,rank_n,lambda_min_n,lambda_max_n,"
           "config_hash\n";
  close << "lambda,m,seed,lhs,rhs,holds,config_hash\n";
  deff << "lambda,effective_dim,d,config_hash\n";

  for (double lambda : config.diag_lambda_grid) {
    const LossModel model(config.loss, lambda);
    Vector w;
    if (config.diag_point == "zeros") {
      w = Vector::Zero(static_cast<Eigen::Index>(train.d()));
    } else if (config.diag_point == "least_squares") {
      w = least_squares_init(train, lambda, config.dense_cap);
    } else {
      w = reference_minimizer(model, train, 1e-12, 100, config.dense_cap).w;
    }
    auto reports = quality_sweep(model, train, w, config.m_grid, lambda, config.diag_seeds,
                                 config.seed, config.dense_cap);
    const std::string lam = format_double(lambda);
    for (const auto& r : reports) {
      sweep << lam << ',' << r.m << ',' << r.seed << ',' << r.k << ','
            << format_double(r.rel_error_fro) << ',' << format_double(r.rel_error_spec) << ','
            << r.rank_n << ',' << format_double(r.lambda_min_n) << ','
            << format_double(r.lambda_max_n) << ',' << out.config_hash << '\n';
      const NewtonCloseness nc{r.newton_closeness_lhs, r.newton_closeness_rhs};
      close << lam << ',' << r.m << ',' << r.seed << ',' << format_double(nc.lhs) << ','
            << format_double(nc.rhs) << ',' << (nc.holds() ? "true" : "false") << ','
            << out.config_hash << '\n';
    }
    if (!reports.empty()) {
      deff << lam << ',' << format_double(reports.front().effective_dim) << ',' << train.d()
           << ',' << out.config_hash << '\n';
    }
    if (log) *log << "diagnostics lambda=" << lam << ": " << reports.size() << " replicates\n";
    out.reports.push_back(std::move(reports));
  }
  write_file(out.sweep_csv, sweep.str());
  write_file(out.closeness_csv, close.str());
  write_file(out.effective_dim_csv, deff.str());
  return out;
}

}  // namespace nysopt::bench
