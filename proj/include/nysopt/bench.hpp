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

// Experiment orchestration behind the nysbench CLI: config files, grid
// enumeration, concurrent execution, CSV traces and JSON summaries.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nysopt/data.hpp"
#include "nysopt/diagnostics.hpp"
#include "nysopt/loss.hpp"
#include "nysopt/optimizers.hpp"

namespace nysopt::bench {

struct ExperimentConfig {
  std::filesystem::path train;
  std::optional<std::filesystem::path> test;
  LossKind loss = LossKind::logistic;
  std::vector<double> lambda_grid{1e-3};
  std::vector<double> eta_grid{1.0};
  std::vector<double> rho_grid{0.1};
  std::size_t m = 50;
  std::optional<std::size_t> k_max;
  std::size_t ell = 0;
  std::size_t batch_size = 128;
  std::size_t epochs = 20;
  std::size_t seeds = 1;
  std::uint64_t seed = 42;
  std::vector<Method> methods{Method::nys_svrg};
  InitPolicy init = InitPolicy::zeros;
  SamplingMode sampling = SamplingMode::with_replacement;
  std::size_t hessian_sample = 0;
  OuterIterate outer = OuterIterate::random;
  bool normalize = false;
  std::size_t dimension = 0;   // 0 = max index over train and test
  std::size_t train_rows = 0;  // 0 = all rows
  std::filesystem::path output_dir = "out";
  std::size_t workers = 1;
  std::size_t dense_cap = kDefaultDenseCap;
  // diagnose
  std::vector<std::size_t> m_grid{5, 10, 25, 50};
  std::size_t diag_seeds = 30;
  std::vector<double> diag_lambda_grid{1e-3};
  std::string diag_point = "reference";  // zeros | least_squares | reference

  // Throws ConfigError on the first invalid field.
  void validate() const;
  // Sorted key = value listing of every field; the hash is FNV-1a over it.
  std::string canonical() const;
  std::string hash() const;
};

// Flat "key = value" text, '#' comments, lists as [a, b, c]. Unknown keys,
// duplicate keys and [sections] are rejected. Relative paths resolve
// against `base_dir`.
ExperimentConfig parse_experiment_config(std::istream& in, const std::filesystem::path& base_dir);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

struct LoadedData {
  Dataset train;
  std::optional<Dataset> test;
};

// Loads, truncates to train_rows, aligns d across splits and optionally
// applies train-derived max-abs scaling to both.
LoadedData load_data(const ExperimentConfig& config);

struct CellSpec {
  std::size_t index = 0;
  Method method = Method::nys_svrg;
  double lambda = 0.0;
  double eta = 0.0;
  double rho = 0.0;  // 1 for methods without a factor
  std::size_t replicate = 0;
  std::uint64_t seed = 0;
  std::string id;
};

// lambda x method x eta x rho (factor methods only) x replicate. Each cell's
// seed is derive_seed(config.seed, cell index).
std::vector<CellSpec> enumerate_cells(const ExperimentConfig& config);

OptimizerConfig optimizer_config(const ExperimentConfig& config, const CellSpec& cell);

struct CellOutcome {
  CellSpec spec;
  RunResult result;
  bool failed = false;
  std::string error;
  std::filesystem::path csv;
};

struct ReferenceInfo {
  double lambda = 0.0;
  double f_star = 0.0;
  std::string method;
  double grad_norm = 0.0;
};

struct RunSummary {
  std::string config_hash;
  std::vector<ReferenceInfo> references;
  std::vector<CellOutcome> cells;
  double total_wall_time_s = 0.0;
  bool all_completed = true;

  nlohmann::json to_json() const;
};

// Columns: the eight trace fields in fixed order, then iterations, clock,
// status, config_hash, cell_id. Missing values are empty fields; a diverged
// run ends with a row whose status is "diverged".
std::string trace_csv(const CellOutcome& cell, const std::string& config_hash);

inline const std::vector<std::string>& timing_columns() {
  static const std::vector<std::string> cols{"wall_time_s", "factor_build_time_s"};
  return cols;
}

// Runs the whole grid, writes one CSV per cell plus summary.json into the
// output directory. `log` receives progress lines when non-null.
RunSummary run_experiment(const ExperimentConfig& config, std::ostream* log = nullptr);

struct DiagnosticsSummary {
  std::string config_hash;
  std::vector<double> lambdas;
  std::vector<std::vector<ApproxQualityReport>> reports;  // one list per lambda
  std::filesystem::path sweep_csv;
  std::filesystem::path closeness_csv;
  std::filesystem::path effective_dim_csv;
};

// Writes quality_sweep.csv, newton_closeness.csv and effective_dimension.csv.
DiagnosticsSummary run_diagnostics(const ExperimentConfig& config, std::ostream* log = nullptr);

// Shortest round-trip decimal text for a double.
std::string format_double(double x);

}  // namespace nysopt::bench
