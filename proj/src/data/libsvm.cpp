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
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>

#include <zlib.h>

#include "nysopt/data.hpp"
#include "nysopt/errors.hpp"

namespace nysopt {
namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f'; }

std::string_view next_token(std::string_view& rest) {
  std::size_t b = 0;
  while (b < rest.size() && is_space(rest[b])) ++b;
  std::size_t e = b;
  while (e < rest.size() && !is_space(rest[e])) ++e;
  std::string_view tok = rest.substr(b, e - b);
  rest.remove_prefix(e);
  return tok;
}

bool parse_double(std::string_view tok, double& out) {
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  if (tok.empty()) return false;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return ec == std::errc() && ptr == tok.data() + tok.size();
}

bool parse_index(std::string_view tok, unsigned long long& out) {
  if (tok.empty()) return false;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return ec == std::errc() && ptr == tok.data() + tok.size();
}

std::string quoted(std::string_view tok) { return "'" + std::string(tok) + "'"; }

std::string read_gzip(const std::filesystem::path& path) {
  gzFile f = gzopen(path.c_str(), "rb");
  if (f == nullptr) throw std::runtime_error("cannot open " + path.string());
  std::string text;
  char buf[1 << 16];
  int got = 0;
  while ((got = gzread(f, buf, sizeof(buf))) > 0) text.append(buf, static_cast<std::size_t>(got));
  const bool failed = got < 0;
  gzclose(f);
  if (failed) throw std::runtime_error("gzip read error in " + path.string());
  return text;
}

}  // namespace

Dataset parse_libsvm(std::istream& in, std::optional<std::size_t> dim_override) {
  std::vector<std::size_t> ptr{0};
  std::vector<Index> cols;
  std::vector<double> vals;
  std::vector<double> labels;
  std::size_t max_index = 0;

  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view rest(line);
    if (const auto hash = rest.find('#'); hash != std::string_view::npos) {
      rest = rest.substr(0, hash);
    }
    std::string_view tok = next_token(rest);
    if (tok.empty()) continue;

    double label = 0.0;
    if (!parse_double(tok, label)) throw ParseError(lineno, "non-numeric label " + quoted(tok));
    if (label == 0.0 || label == -1.0) {
      labels.push_back(-1.0);
    } else if (label == 1.0) {
      labels.push_back(1.0);
    } else {
      throw ParseError(lineno, "label " + quoted(tok) + " is not one of 0, 1, -1, +1");
    }

    unsigned long long prev = 0;
    while (!(tok = next_token(rest)).empty()) {
      const auto colon = tok.find(':');
      if (colon == std::string_view::npos) {
        throw ParseError(lineno, "expected index:value, got " + quoted(tok));
      }
      unsigned long long index = 0;
      double value = 0.0;
      if (!parse_index(tok.substr(0, colon), index) || index == 0) {
        throw ParseError(lineno, "bad feature index in " + quoted(tok));
      }
      if (!parse_double(tok.substr(colon + 1), value)) {
        throw ParseError(lineno, "non-numeric feature value in " + quoted(tok));
      }
      if (!std::isfinite(value)) throw ParseError(lineno, "non-finite value in " + quoted(tok));
      if (index <= prev) {
        throw ParseError(lineno, "feature indices must be strictly increasing at " + quoted(tok));
      }
      if (index > 0xffffffffULL) throw ParseError(lineno, "feature index too large");
      prev = index;
      cols.push_back(static_cast<Index>(index - 1));
      vals.push_back(value);
      max_index = std::max<std::size_t>(max_index, index);
    }
    ptr.push_back(cols.size());
  }
  if (in.bad()) throw std::runtime_error("I/O error while reading LIBSVM data");

  std::size_t dim = max_index;
  if (dim_override) {
    if (*dim_override < max_index) {
      throw ConfigError("dimension override " + std::to_string(*dim_override) +
                        " is smaller than the largest feature index " +
                        std::to_string(max_index));
    }
    dim = *dim_override;
  }
  return Dataset(dim, std::move(ptr), std::move(cols), std::move(vals), std::move(labels));
}

Dataset load_libsvm(const std::filesystem::path& path, std::optional<std::size_t> dim_override) {
  if (path.extension() == ".gz") {
    std::istringstream in(read_gzip(path));
    return parse_libsvm(in, dim_override);
  }
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return parse_libsvm(in, dim_override);
}

void write_libsvm(std::ostream& out, const Dataset& data) {
  char buf[64];
  for (std::size_t i = 0; i < data.n(); ++i) {
    out << (data.label(i) > 0 ? "+1" : "-1");
    const SparseRow x = data.row(i);
    for (std::size_t j = 0; j < x.idx.size(); ++j) {
      const auto res = std::to_chars(buf, buf + sizeof(buf), x.val[j]);
      out << ' ' << (x.idx[j] + 1) << ':' << std::string_view(buf, res.ptr - buf);
    }
    out << '\n';
  }
}

}  // namespace nysopt
