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

#ifndef TERRATWIN_SIMD_KERNELS_HPP_
#define TERRATWIN_SIMD_KERNELS_HPP_

// Per-cell arithmetic used by the raster services. Each kernel has a scalar
// reference and, on x86-64, an AVX2 variant chosen at runtime. The vector
// variants perform the same IEEE operations in the same order as the scalar
// ones (no FMA contraction), so results are bit-identical across variants.

#include <cstddef>
#include <span>
#include <string_view>

namespace terratwin::simd {

enum class Isa { kScalar, kAvx2 };

std::string_view isa_name(Isa isa);
// Best variant the running CPU supports.
Isa detected_isa();
// Variant currently used; the TERRATWIN_ISA environment variable ("scalar"
// or "avx2") overrides detection at first use.
Isa active_isa();
// Throws InvalidArgument if the CPU lacks the requested ISA.
void set_active_isa(Isa isa);
bool isa_supported(Isa isa);

class ScopedIsa {
 public:
  explicit ScopedIsa(Isa isa) : previous_(active_isa()) { set_active_isa(isa); }
  ~ScopedIsa() { set_active_isa(previous_); }
  ScopedIsa(const ScopedIsa&) = delete;
  ScopedIsa& operator=(const ScopedIsa&) = delete;

 private:
  Isa previous_;
};

inline constexpr double kClassThresholds[4] = {0.2, 0.4, 0.6, 0.8};

struct SegmentSoA {
  const double* ax;
  const double* ay;
  const double* bx;
  const double* by;
  std::size_t count;
};

struct Kernels {
  // out[i] = sum_k weights[k] * layers[k][i], accumulated in k order;
  // nodata if any layers[k][i] == nodata.
  void (*weighted_sum)(const double* const* layers, const double* weights,
                       std::size_t n_layers, std::size_t n, double nodata,
                       double* out);
  // out[i] = clamp(multiplier * (alpha * d[i] + (1 - alpha) * s[i]), 0, 1).
  void (*risk_blend)(const double* s, const double* d, std::size_t n,
                     double alpha, double multiplier, double nodata,
                     double* out);
  // out[i] = 1 + #{k : r[i] >= kClassThresholds[k]}.
  void (*classify)(const double* r, std::size_t n, double nodata, double* out);
  // min_sq[i] = min(min_sq[i], min_j |(xs[i], y) - (px[j], py[j])|^2).
  void (*min_sq_to_points)(const double* xs, std::size_t n, double y,
                           const double* px, const double* py, std::size_t m,
                           double* min_sq);
  // Same against segments, using geo::segment_distance_sq's formula.
  void (*min_sq_to_segments)(const double* xs, std::size_t n, double y,
                             const SegmentSoA& segs, double* min_sq);
  // out[i] = sum_d (columns[d][i] - centroid[d])^2, accumulated in d order.
  void (*sq_dist_to_centroid)(const double* const* columns, std::size_t dims,
                              std::size_t n, const double* centroid,
                              double* out);
};

const Kernels& kernels();
const Kernels& kernels_for(Isa isa);

namespace scalar {
const Kernels& table();
}
namespace avx2 {
// nullptr when the library was built without AVX2 support.
const Kernels* table();
}

}  // namespace terratwin::simd

#endif  // TERRATWIN_SIMD_KERNELS_HPP_
