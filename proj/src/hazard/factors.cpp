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

#include "terratwin/hazard/factors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace terratwin::hazard {

namespace {

RasterLayer map_layer(const RasterLayer& src, const std::string& name,
                      double (*fn)(double, const void*), const void* ctx) {
  const geo::GridSpec& spec = src.spec();
  RasterLayer out(spec, name, "1");
  auto dst = out.mutable_values();
  const auto in = src.values();
  for (std::size_t i = 0; i < in.size(); ++i) {
    dst[i] = in[i] == spec.nodata ? spec.nodata : fn(in[i], ctx);
  }
  return out;
}

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

}  // namespace

double fuel_for_landcover(int code) {
  namespace lc = geo::landcover_code;
  switch (code) {
    case lc::kWater: return 0.0;
    case lc::kBare: return 0.1;
    case lc::kShrub: return 0.8;
    case lc::kForest: return 1.0;
    case lc::kCropland: return 0.4;
    case lc::kBuilt: return 0.2;
    default: return 0.0;
  }
}

// Geology codes: 1 limestone, 2 sandstone, 3 marl and clay, 4 ophiolite,
// 5 alluvium.
double weakness_for_geology(int code) {
  switch (code) {
    case 1: return 0.3;
    case 2: return 0.5;
    case 3: return 0.9;
    case 4: return 0.15;
    case 5: return 0.7;
    default: return 0.5;
  }
}

std::vector<RasterLayer> build_factor_layers(const geo::CountryModel& model) {
  const RasterLayer& landcover = model.layer("landcover");
  const RasterLayer& slope = model.layer("slope");
  const RasterLayer& precipitation = model.layer("precipitation");
  const RasterLayer& elevation = model.layer("elevation");
  const RasterLayer& geology = model.layer("geology");
  const RasterLayer& dryness = model.layer("summer_dryness");
  const RasterLayer& faults = model.layer("fault_proximity");

  std::vector<RasterLayer> out;
  out.push_back(map_layer(
      landcover, "fuel",
      [](double v, const void*) {
        return fuel_for_landcover(static_cast<int>(v));
      },
      nullptr));
  out.push_back(map_layer(
      slope, "slope_norm",
      [](double v, const void*) {
        return std::min(v / kSlopeNormCapDegrees, 1.0);
      },
      nullptr));
  out.push_back(map_layer(
      slope, "flatness",
      [](double v, const void*) {
        return 1.0 - std::min(v / kSlopeNormCapDegrees, 1.0);
      },
      nullptr));

  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const double v : precipitation.values()) {
    if (v == precipitation.spec().nodata) continue;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const double range[2] = {lo, hi};
  out.push_back(map_layer(
      precipitation, "precipitation_norm",
      [](double v, const void* ctx) {
        const auto* r = static_cast<const double*>(ctx);
        return r[1] > r[0] ? (v - r[0]) / (r[1] - r[0]) : 0.0;
      },
      range));

  const double half_max = 0.5 * model.params.max_elevation_m;
  out.push_back(map_layer(
      elevation, "low_elevation",
      [](double v, const void* ctx) {
        return 1.0 - clamp01(v / *static_cast<const double*>(ctx));
      },
      &half_max));
  out.push_back(map_layer(
      geology, "geology_weakness",
      [](double v, const void*) {
        return weakness_for_geology(static_cast<int>(v));
      },
      nullptr));
  out.push_back(map_layer(
      dryness, "summer_dryness", [](double v, const void*) { return clamp01(v); },
      nullptr));
  out.push_back(map_layer(
      faults, "fault_proximity", [](double v, const void*) { return clamp01(v); },
      nullptr));
  return out;
}

}  // namespace terratwin::hazard
