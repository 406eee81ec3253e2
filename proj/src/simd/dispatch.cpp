// Copyright 2026 The terratwin Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <atomic>
#include <cstdlib>
#include <string>

#include "terratwin/common/error.hpp"
#include "terratwin/simd/kernels.hpp"

namespace terratwin::simd {

#ifndef TERRATWIN_HAVE_AVX2
namespace avx2 {
const Kernels* table() { return nullptr; }
}  // namespace avx2
#endif

namespace {

std::atomic<int>& active_slot() {
  static std::atomic<int> slot{[] {
    Isa isa = detected_isa();
    if (const char* env = std::getenv("TERRATWIN_ISA")) {
      const std::string v(env);
      if (v == "scalar") isa = Isa::kScalar;
      if (v == "avx2" && isa_supported(Isa::kAvx2)) isa = Isa::kAvx2;
    }
    return static_cast<int>(isa);
  }()};
  return slot;
}

}  // namespace

std::string_view isa_name(Isa isa) {
  return isa == Isa::kAvx2 ? "avx2" : "scalar";
}

bool isa_supported(Isa isa) {
  if (isa == Isa::kScalar) return true;
#if defined(__x86_64__) && defined(TERRATWIN_HAVE_AVX2)
  return avx2::table() != nullptr && __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Isa detected_isa() {
  return isa_supported(Isa::kAvx2) ? Isa::kAvx2 : Isa::kScalar;
}

Isa active_isa() { return static_cast<Isa>(active_slot().load()); }

void set_active_isa(Isa isa) {
  if (!isa_supported(isa)) {
    throw InvalidArgument(std::string("ISA not supported on this CPU: ") +
                          std::string(isa_name(isa)));
  }
  active_slot().store(static_cast<int>(isa));
}

const Kernels& kernels_for(Isa isa) {
  if (isa == Isa::kAvx2 && isa_supported(Isa::kAvx2)) return *avx2::table();
  return scalar::table();
}

const Kernels& kernels() { return kernels_for(active_isa()); }

}  // namespace terratwin::simd
