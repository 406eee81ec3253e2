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

#include "terratwin/simd/kernels.hpp"

#include "terratwin/geomodel/geometry.hpp"

namespace terratwin::simd::scalar {
namespace {

void weighted_sum(const double* const* layers, const double* weights,
                  std::size_t n_layers, std::size_t n, double nodata,
                  double* out) {
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    bool missing = false;
    for (std::size_t k = 0; k < n_layers; ++k) {
      const double v = layers[k][i];
      missing |= v == nodata;
      acc = acc + weights[k] * v;
    }
    out[i] = missing ? nodata : acc;
  }
}

void risk_blend(const double* s, const double* d, std::size_t n, double alpha,
                double multiplier, double nodata, double* out) {
  const double beta = 1.0 - alpha;
  for (std::size_t i = 0; i < n; ++i) {
    if (s[i] == nodata || d[i] == nodata) {
      out[i] = nodata;
      continue;
    }
    const double r = multiplier * (alpha * d[i] + beta * s[i]);
    out[i] = r < 0.0 ? 0.0 : (r > 1.0 ? 1.0 : r);
  }
}

void classify(const double* r, std::size_t n, double nodata, double* out) {
  for (std::size_t i = 0; i < n; ++i) {
    if (r[i] == nodata) {
      out[i] = nodata;
      continue;
    }
    double cls = 1.0;
    for (double t : kClassThresholds) {
      if (r[i] >= t) cls += 1.0;
    }
    out[i] = cls;
  }
}

void min_sq_to_points(const double* xs, std::size_t n, double y,
                      const double* px, const double* py, std::size_t m,
                      double* min_sq) {
  for (std::size_t i = 0; i < n; ++i) {
    double best = min_sq[i];
    for (std::size_t j = 0; j < m; ++j) {
      const double dx = xs[i] - px[j];
      const double dy = y - py[j];
      const double d = dx * dx + dy * dy;
      if (d < best) best = d;
    }
    min_sq[i] = best;
  }
}

void min_sq_to_segments(const double* xs, std::size_t n, double y,
                        const SegmentSoA& segs, double* min_sq) {
  for (std::size_t i = 0; i < n; ++i) {
    double best = min_sq[i];
    for (std::size_t j = 0; j < segs.count; ++j) {
      const double d = geo::segment_distance_sq(
          {xs[i], y}, {segs.ax[j], segs.ay[j]}, {segs.bx[j], segs.by[j]});
      if (d < best) best = d;
    }
    min_sq[i] = best;
  }
}

void sq_dist_to_centroid(const double* const* columns, std::size_t dims,
                         std::size_t n, const double* centroid, double* out) {
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t d = 0; d < dims; ++d) {
      const double diff = columns[d][i] - centroid[d];
      acc = acc + diff * diff;
    }
    out[i] = acc;
  }
}

constexpr Kernels kTable{weighted_sum,     risk_blend,         classify,
                         min_sq_to_points, min_sq_to_segments, sq_dist_to_centroid};

}  // namespace

const Kernels& table() { return kTable; }

}  // namespace terratwin::simd::scalar
