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

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "nysopt/bench.hpp"
#include "nysopt/errors.hpp"

namespace nysopt::bench {
namespace {

using Values = std::vector<std::string>;

std::string join(const Values& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + v[i];
  return out;
}

const std::string& single(const std::string& key, const Values& v) {
  if (v.size() != 1) throw ConfigError("config key '" + key + "' expects a single value");
  return v.front();
}

double to_double(const std::string& key, const std::string& s) {
  double x = 0.0;
  const char* b = s.data();
  if (!s.empty() && s.front() == '+') ++b;
  const auto [p, ec] = std::from_chars(b, s.data() + s.size(), x);
  if (ec != std::errc() || p != s.data() + s.size() || !std::isfinite(x)) {
    throw ConfigError("config key '" + key + "': '" + s + "' is not a finite number");
  }
  return x;
}

std::uint64_t to_u64(const std::string& key, const std::string& s) {
  std::uint64_t x = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc() || p != s.data() + s.size()) {
    throw ConfigError("config key '" + key + "': '" + s + "' is not a nonnegative integer");
  }
  return x;
}

bool to_bool(const std::string& key, const std::string& s) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ConfigError("config key '" + key + "': '" + s + "' is not a boolean");
}

std::filesystem::path to_path(const std::filesystem::path& base, const std::string& s) {
  std::filesystem::path p(s);
  return p.is_absolute() ? p : base / p;
}

template <typename T, typename F>
std::vector<T> to_list(const std::string& key, const Values& v, F convert) {
  std::vector<T> out;
  for (const auto& s : v) out.push_back(convert(key, s));
  return out;
}

SamplingMode parse_sampling(const std::string& key, const std::string& s) {
  if (s == "with_replacement") return SamplingMode::with_replacement;
  if (s == "without_replacement" || s == "without_replacement_per_epoch") return SamplingMode::without_replacement;
  throw ConfigError("config key '" + key + "': unknown sampling mode '" + s + "'");
}

OuterIterate parse_outer(const std::string& key, const std::string& s) {
  if (s == "random") return OuterIterate::random;
  if (s == "last") return OuterIterate::last;
  throw ConfigError("config key '" + key + "': unknown outer iterate '" + s + "'");
}

std::string list_text(const std::vector<double>& xs) {
  std::string out = "[";
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? ", " : "") + format_double(xs[i]);
  return out + "]";
}

std::string list_text(const std::vector<std::size_t>& xs) {
  std::string out = "[";
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? ", " : "") + std::to_string(xs[i]);
  return out + "]";
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

ExperimentConfig parse_experiment_config(std::istream& in,
                                         const std::filesystem::path& base_dir) {
  CLI::ConfigTOML reader;
  std::vector<CLI::ConfigItem> items;
  try {
    items = reader.from_config(in);
  } catch (const CLI::Error& e) {
    throw ConfigError(std::string("config syntax error: ") + e.what());
  }

  ExperimentConfig c;
  using Setter = std::function<void(const std::string&, const Values&)>;
  const std::map<std::string, Setter> setters{
      {"train", [&](auto& k, auto& v) { c.train = to_path(base_dir, single(k, v)); }},
      {"test", [&](auto& k, auto& v) { c.test = to_path(base_dir, single(k, v)); }},
      {"loss", [&](auto& k, auto& v) { c.loss = parse_loss_kind(single(k, v)); }},
      {"lambda_grid", [&](auto& k, auto& v) { c.lambda_grid = to_list<double>(k, v, to_double); }},
      {"eta_grid", [&](auto& k, auto& v) { c.eta_grid = to_list<double>(k, v, to_double); }},
      {"rho_grid", [&](auto& k, auto& v) { c.rho_grid = to_list<double>(k, v, to_double); }},
      {"m", [&](auto& k, auto& v) { c.m = to_u64(k, single(k, v)); }},
      {"k_max",
       [&](auto& k, auto& v) {
         const auto& s = single(k, v);
         if (s == "none") {
           c.k_max.reset();
         } else {
           c.k_max = to_u64(k, s);
         }
       }},
      {"ell", [&](auto& k, auto& v) { c.ell = to_u64(k, single(k, v)); }},
      {"batch_size", [&](auto& k, auto& v) { c.batch_size = to_u64(k, single(k, v)); }},
      {"epochs", [&](auto& k, auto& v) { c.epochs = to_u64(k, single(k, v)); }},
      {"seeds", [&](auto& k, auto& v) { c.seeds = to_u64(k, single(k, v)); }},
      {"seed", [&](auto& k, auto& v) { c.seed = to_u64(k, single(k, v)); }},
      {"methods",
       [&](auto&, auto& v) {
         c.methods.clear();
         for (const auto& s : v) c.methods.push_back(parse_method(s));
       }},
      {"init", [&](auto& k, auto& v) { c.init = parse_init(single(k, v)); }},
      {"sampling", [&](auto& k, auto& v) { c.sampling = parse_sampling(k, single(k, v)); }},
      {"hessian_sample",
       [&](auto& k, auto& v) {
         const auto& s = single(k, v);
         c.hessian_sample = s == "all" ? 0 : to_u64(k, s);
       }},
      {"outer_iterate", [&](auto& k, auto& v) { c.outer = parse_outer(k, single(k, v)); }},
      {"normalize", [&](auto& k, auto& v) { c.normalize = to_bool(k, single(k, v)); }},
      {"dimension", [&](auto& k, auto& v) { c.dimension = to_u64(k, single(k, v)); }},
      {"train_rows", [&](auto& k, auto& v) { c.train_rows = to_u64(k, single(k, v)); }},
      {"output_dir", [&](auto& k, auto& v) { c.output_dir = to_path(base_dir, single(k, v)); }},
      {"workers", [&](auto& k, auto& v) { c.workers = to_u64(k, single(k, v)); }},
      {"dense_cap", [&](auto& k, auto& v) { c.dense_cap = to_u64(k, single(k, v)); }},
      {"m_grid",
       [&](auto& k, auto& v) {
         c.m_grid.clear();
         for (const auto& s : v) c.m_grid.push_back(to_u64(k, s));
       }},
      {"diag_seeds", [&](auto& k, auto& v) { c.diag_seeds = to_u64(k, single(k, v)); }},
      {"diag_lambda_grid",
       [&](auto& k, auto& v) { c.diag_lambda_grid = to_list<double>(k, v, to_double); }},
      {"diag_point", [&](auto& k, auto& v) { c.diag_point = single(k, v); }},
  };

  std::set<std::string> seen;
  for (const auto& item : items) {
    if (!item.parents.empty()) {
      throw ConfigError("config sections are not supported (found '" + item.fullname() + "')");
    }
    const auto it = setters.find(item.name);
    if (it == setters.end()) throw ConfigError("unknown config key '" + item.name + "'");
    if (!seen.insert(item.name).second) {
      throw ConfigError("duplicate config key '" + item.name + "'");
    }
    // CLI11 yields an empty-string element for `key = []`
    Values values;
    for (const auto& s : item.inputs) {
      if (!s.empty()) values.push_back(s);
    }
    try {
      it->second(item.name, values);
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      throw ConfigError("config key '" + item.name + "' (" + join(values) + "): " + e.what());
    }
  }
  if (!seen.count("train")) throw ConfigError("config is missing the required key 'train'");
  c.validate();
  return c;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  return parse_experiment_config(in, path.parent_path());
}

void ExperimentConfig::validate() const {
  auto positive = [](const std::vector<double>& g, const char* name, bool allow_zero) {
    if (g.empty()) throw ConfigError(std::string(name) + " must be nonempty");
    for (double x : g) {
      if (!(allow_zero ? x >= 0.0 : x > 0.0)) {
        throw ConfigError(std::string(name) + " entries must be " + (allow_zero ? ">= 0" : "> 0"));
      }
    }
  };
  positive(lambda_grid, "lambda_grid", true);
  positive(eta_grid, "eta_grid", false);
  positive(rho_grid, "rho_grid", false);
  positive(diag_lambda_grid, "diag_lambda_grid", false);
  if (methods.empty()) throw ConfigError("methods must be nonempty");
  if (m == 0) throw ConfigError("m must be >= 1");
  if (batch_size == 0) throw ConfigError("batch_size must be >= 1");
  if (epochs == 0) throw ConfigError("epochs must be >= 1");
  if (seeds == 0) throw ConfigError("seeds must be >= 1");
  if (workers == 0) throw ConfigError("workers must be >= 1");
  if (m_grid.empty()) throw ConfigError("m_grid must be nonempty");
  for (std::size_t x : m_grid) {
    if (x == 0) throw ConfigError("m_grid entries must be >= 1");
  }
  if (diag_seeds == 0) throw ConfigError("diag_seeds must be >= 1");
  if (diag_point != "zeros" && diag_point != "least_squares" && diag_point != "reference") {
    throw ConfigError("diag_point must be zeros, least_squares or reference");
  }
  if (init == InitPolicy::given) throw ConfigError("init = given is not available from a config file");
}

std::string ExperimentConfig::canonical() const {
  std::map<std::string, std::string> kv;
  kv["train"] = train.string();
  kv["test"] = test ? test->string() : "";
  kv["loss"] = std::string(loss_name(loss));
  kv["lambda_grid"] = list_text(lambda_grid);
  kv["eta_grid"] = list_text(eta_grid);
  kv["rho_grid"] = list_text(rho_grid);
  kv["m"] = std::to_string(m);
  kv["k_max"] = k_max ? std::to_string(*k_max) : "none";
  kv["ell"] = std::to_string(ell);
  kv["batch_size"] = std::to_string(batch_size);
  kv["epochs"] = std::to_string(epochs);
  kv["seeds"] = std::to_string(seeds);
  kv["seed"] = std::to_string(seed);
  std::string ms = "[";
  for (std::size_t i = 0; i < methods.size(); ++i) {
    ms += (i ? ", " : "") + std::string(method_name(methods[i]));
  }
  kv["methods"] = ms + "]";
  kv["init"] = std::string(init_name(init));
  kv["sampling"] = sampling == SamplingMode::with_replacement ? "with_replacement"
                                                              : "without_replacement";
  kv["hessian_sample"] = hessian_sample == 0 ? "all" : std::to_string(hessian_sample);
  kv["outer_iterate"] = outer == OuterIterate::random ? "random" : "last";
  kv["normalize"] = normalize ? "true" : "false";
  kv["dimension"] = std::to_string(dimension);
  kv["train_rows"] = std::to_string(train_rows);
  kv["dense_cap"] = std::to_string(dense_cap);
  kv["m_grid"] = list_text(m_grid);
  kv["diag_seeds"] = std::to_string(diag_seeds);
  kv["diag_lambda_grid"] = list_text(diag_lambda_grid);
  kv["diag_point"] = diag_point;
  // output_dir and workers do not change results and are left out
  std::ostringstream os;
  for (const auto& [k, v] : kv) os << k << " = " << v << '\n';
  return os.str();
}

std::string ExperimentConfig::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canonical()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace nysopt::bench
