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

// Compiled with -mavx2 (and without -mfma); only reached after a runtime
// CPU check.

#include <immintrin.h>

#include <vector>

#include "terratwin/geomodel/geometry.hpp"
#include "terratwin/simd/kernels.hpp"

namespace terratwin::simd::avx2 {
namespace {

constexpr std::size_t kLanes = 4;

void weighted_sum(const double* const* layers, const double* weights,
                  std::size_t n_layers, std::size_t n, double nodata,
                  double* out) {
  const __m256d vnodata = _mm256_set1_pd(nodata);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    __m256d acc = _mm256_setzero_pd();
    __m256d missing = _mm256_setzero_pd();
    for (std::size_t k = 0; k < n_layers; ++k) {
      const __m256d v = _mm256_loadu_pd(layers[k] + i);
      missing = _mm256_or_pd(missing, _mm256_cmp_pd(v, vnodata, _CMP_EQ_OQ));
      acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_set1_pd(weights[k]), v));
    }
    _mm256_storeu_pd(out + i, _mm256_blendv_pd(acc, vnodata, missing));
  }
  if (i < n) {
    std::vector<const double*> tails(n_layers);
    for (std::size_t k = 0; k < n_layers; ++k) tails[k] = layers[k] + i;
    scalar::table().weighted_sum(tails.data(), weights, n_layers, n - i,
                                 nodata, out + i);
  }
}

void risk_blend(const double* s, const double* d, std::size_t n, double alpha,
                double multiplier, double nodata, double* out) {
  const __m256d va = _mm256_set1_pd(alpha);
  const __m256d vb = _mm256_set1_pd(1.0 - alpha);
  const __m256d vm = _mm256_set1_pd(multiplier);
  const __m256d vnodata = _mm256_set1_pd(nodata);
  const __m256d zero = _mm256_setzero_pd();
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d vs = _mm256_loadu_pd(s + i);
    const __m256d vd = _mm256_loadu_pd(d + i);
    const __m256d missing =
        _mm256_or_pd(_mm256_cmp_pd(vs, vnodata, _CMP_EQ_OQ),
                     _mm256_cmp_pd(vd, vnodata, _CMP_EQ_OQ));
    const __m256d r = _mm256_mul_pd(
        vm, _mm256_add_pd(_mm256_mul_pd(va, vd), _mm256_mul_pd(vb, vs)));
    // max(0, min(1, r)) returns r itself on ties, matching the scalar form.
    const __m256d clamped = _mm256_max_pd(zero, _mm256_min_pd(one, r));
    _mm256_storeu_pd(out + i, _mm256_blendv_pd(clamped, vnodata, missing));
  }
  scalar::table().risk_blend(s + i, d + i, n - i, alpha, multiplier, nodata,
                             out + i);
}

void classify(const double* r, std::size_t n, double nodata, double* out) {
  const __m256d vnodata = _mm256_set1_pd(nodata);
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d v = _mm256_loadu_pd(r + i);
    __m256d cls = one;
    for (double t : kClassThresholds) {
      const __m256d ge = _mm256_cmp_pd(v, _mm256_set1_pd(t), _CMP_GE_OQ);
      cls = _mm256_add_pd(cls, _mm256_and_pd(ge, one));
    }
    const __m256d missing = _mm256_cmp_pd(v, vnodata, _CMP_EQ_OQ);
    _mm256_storeu_pd(out + i, _mm256_blendv_pd(cls, vnodata, missing));
  }
  scalar::table().classify(r + i, n - i, nodata, out + i);
}

void min_sq_to_points(const double* xs, std::size_t n, double y,
                      const double* px, const double* py, std::size_t m,
                      double* min_sq) {
  const __m256d vy = _mm256_set1_pd(y);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d vx = _mm256_loadu_pd(xs + i);
    __m256d best = _mm256_loadu_pd(min_sq + i);
    for (std::size_t j = 0; j < m; ++j) {
      const __m256d dx = _mm256_sub_pd(vx, _mm256_set1_pd(px[j]));
      const __m256d dy = _mm256_sub_pd(vy, _mm256_set1_pd(py[j]));
      const __m256d d =
          _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
      best = _mm256_min_pd(d, best);
    }
    _mm256_storeu_pd(min_sq + i, best);
  }
  scalar::table().min_sq_to_points(xs + i, n - i, y, px, py, m, min_sq + i);
}

void min_sq_to_segments(const double* xs, std::size_t n, double y,
                        const SegmentSoA& segs, double* min_sq) {
  const __m256d vy = _mm256_set1_pd(y);
  const __m256d zero = _mm256_setzero_pd();
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d vx = _mm256_loadu_pd(xs + i);
    __m256d best = _mm256_loadu_pd(min_sq + i);
    for (std::size_t j = 0; j < segs.count; ++j) {
      const double dx = segs.bx[j] - segs.ax[j];
      const double dy = segs.by[j] - segs.ay[j];
      const double len_sq = dx * dx + dy * dy;
      const __m256d ax = _mm256_set1_pd(segs.ax[j]);
      const __m256d ay = _mm256_set1_pd(segs.ay[j]);
      const __m256d vdx = _mm256_set1_pd(dx);
      const __m256d vdy = _mm256_set1_pd(dy);
      __m256d t = zero;
      if (len_sq > 0.0) {
        const __m256d num = _mm256_add_pd(
            _mm256_mul_pd(_mm256_sub_pd(vx, ax), vdx),
            _mm256_mul_pd(_mm256_sub_pd(vy, ay), vdy));
        t = _mm256_div_pd(num, _mm256_set1_pd(len_sq));
        t = _mm256_max_pd(zero, _mm256_min_pd(one, t));
      }
      const __m256d ex =
          _mm256_sub_pd(vx, _mm256_add_pd(ax, _mm256_mul_pd(t, vdx)));
      const __m256d ey =
          _mm256_sub_pd(vy, _mm256_add_pd(ay, _mm256_mul_pd(t, vdy)));
      const __m256d d =
          _mm256_add_pd(_mm256_mul_pd(ex, ex), _mm256_mul_pd(ey, ey));
      best = _mm256_min_pd(d, best);
    }
    _mm256_storeu_pd(min_sq + i, best);
  }
  scalar::table().min_sq_to_segments(xs + i, n - i, y, segs, min_sq + i);
}

void sq_dist_to_centroid(const double* const* columns, std::size_t dims,
                         std::size_t n, const double* centroid, double* out) {
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t d = 0; d < dims; ++d) {
      const __m256d diff = _mm256_sub_pd(_mm256_loadu_pd(columns[d] + i),
                                         _mm256_set1_pd(centroid[d]));
      acc = _mm256_add_pd(acc, _mm256_mul_pd(diff, diff));
    }
    _mm256_storeu_pd(out + i, acc);
  }
  if (i < n) {
    std::vector<const double*> tails(dims);
    for (std::size_t d = 0; d < dims; ++d) tails[d] = columns[d] + i;
    scalar::table().sq_dist_to_centroid(tails.data(), dims, n - i, centroid,
                                        out + i);
  }
}

constexpr Kernels kTable{weighted_sum,     risk_blend,         classify,
                         min_sq_to_points, min_sq_to_segments, sq_dist_to_centroid};

}  // namespace

const Kernels* table() { return &kTable; }

}  // namespace terratwin::simd::avx2
