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

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "nysopt/kernels.hpp"

namespace nysopt::kernels {
namespace {

bool cpu_has_avx2() {
#if defined(NYSOPT_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  static const bool has = [] {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  }();
  return has;
#else
  return false;
#endif
}

Isa initial_isa() {
  if (const char* env = std::getenv("NYSOPT_ISA")) {
    std::string v(env);
    if (v == "scalar") return Isa::scalar;
    if (v == "avx2" && cpu_has_avx2()) return Isa::avx2;
  }
  return detected_isa();
}

std::atomic<Isa>& active_slot() {
  static std::atomic<Isa> slot{initial_isa()};
  return slot;
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
  }
  return "unknown";
}

Isa detected_isa() {
  static const Isa best = cpu_has_avx2() ? Isa::avx2 : Isa::scalar;
  return best;
}

bool isa_available(Isa isa) { return isa == Isa::scalar || cpu_has_avx2(); }

Isa active_isa() { return active_slot().load(std::memory_order_relaxed); }

void set_active_isa(Isa isa) {
  if (!isa_available(isa)) {
    throw std::invalid_argument("kernel variant '" + std::string(isa_name(isa)) +
                                "' is not available on this machine");
  }
  active_slot().store(isa, std::memory_order_relaxed);
}

const KernelTable& table(Isa isa) {
  if (isa == Isa::scalar) return detail::scalar_table();
#if defined(NYSOPT_HAVE_AVX2)
  if (cpu_has_avx2()) return detail::avx2_table();
#endif
  throw std::invalid_argument("kernel variant '" + std::string(isa_name(isa)) +
                              "' is not available on this machine");
}

const KernelTable& active() {
#if defined(NYSOPT_HAVE_AVX2)
  if (active_isa() == Isa::avx2) return detail::avx2_table();
#endif
  return detail::scalar_table();
}

}  // namespace nysopt::kernels
