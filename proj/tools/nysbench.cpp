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

// nysbench: run optimizer grids, Hessian-approximation diagnostics and
// config validation from a flat key = value config file.

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "nysopt/bench.hpp"
#include "nysopt/data.hpp"
#include "nysopt/errors.hpp"
#include "nysopt/kernels.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kPartialFailure = 1;
constexpr int kConfigError = 2;

struct Overrides {
  std::size_t workers = 0;
  std::string out;
  std::optional<std::uint64_t> seed;
};

nysopt::bench::ExperimentConfig load(const std::string& path, const Overrides& o) {
  auto c = nysopt::bench::load_experiment_config(path);
  if (o.workers > 0) c.workers = o.workers;
  if (!o.out.empty()) c.output_dir = o.out;
  if (o.seed) c.seed = *o.seed;
  c.validate();
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nystrom-preconditioned stochastic optimization benchmarks"};
  app.require_subcommand(1);
  std::string isa;
  app.add_option("--isa", isa, "Kernel variant: scalar or avx2 (default: best available)");

  std::string config_path;
  Overrides over;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("config", config_path, "Config file")->required()->check(CLI::ExistingFile);
    sub->add_option("--workers", over.workers, "Concurrent cells");
    sub->add_option("--out", over.out, "Output directory");
    sub->add_option("--seed", over.seed, "Master seed");
  };
  auto* run = app.add_subcommand("run", "Run the optimizer grid");
  add_common(run);
  auto* diag = app.add_subcommand("diagnose", "Hessian approximation quality sweep");
  add_common(diag);
  auto* validate = app.add_subcommand("validate", "Parse and check a config file");
  validate->add_option("config", config_path, "Config file")->required()->check(CLI::ExistingFile);

  auto* gen = app.add_subcommand("generate", "Write a synthetic adult-like LIBSVM file");
  std::size_t gen_rows = 32561;
  std::uint64_t gen_seed = 1;
  std::string gen_out;
  gen->add_option("--rows", gen_rows, "Number of rows");
  gen->add_option("--seed", gen_seed, "Generator seed");
  gen->add_option("output", gen_out, "Output path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (!isa.empty()) {
      if (isa == "scalar") {
        nysopt::kernels::set_active_isa(nysopt::kernels::Isa::scalar);
      } else if (isa == "avx2") {
        nysopt::kernels::set_active_isa(nysopt::kernels::Isa::avx2);
      } else {
        throw nysopt::ConfigError("unknown --isa '" + isa + "'");
      }
    }

    if (*gen) {
      std::ofstream out(gen_out);
      if (!out) throw nysopt::ConfigError("cannot write " + gen_out);
      nysopt::write_libsvm(out, nysopt::make_adult_like(gen_rows, gen_seed));
      return kOk;
    }
    if (*validate) {
      const auto c = nysopt::bench::load_experiment_config(config_path);
      const auto cells = nysopt::bench::enumerate_cells(c);
      std::cout << "config ok, hash " << c.hash() << ", " << cells.size() << " cells\n";
      return kOk;
    }
    const auto c = load(config_path, over);
    if (*diag) {
      const auto s = nysopt::bench::run_diagnostics(c, &std::cerr);
      std::cout << s.sweep_csv.string() << '\n'
                << s.closeness_csv.string() << '\n'
                << s.effective_dim_csv.string() << '\n';
      return kOk;
    }
    const auto s = nysopt::bench::run_experiment(c, &std::cerr);
    std::cout << (c.output_dir / "summary.json").string() << '\n';
    return s.all_completed ? kOk : kPartialFailure;
  } catch (const nysopt::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const nysopt::ParseError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kPartialFailure;
  }
}
