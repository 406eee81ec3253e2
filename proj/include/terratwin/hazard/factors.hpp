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

#ifndef TERRATWIN_HAZARD_FACTORS_HPP_
#define TERRATWIN_HAZARD_FACTORS_HPP_

#include <map>
#include <string>
#include <vector>

#include "terratwin/geomodel/country.hpp"
#include "terratwin/hazard/hazard.hpp"

namespace terratwin::hazard {

// Normalized [0,1] factor layers derived from a model's base layers:
//   fuel               land-cover lookup
//   slope_norm         min(slope / 35 deg, 1)
//   flatness           1 - slope_norm
//   precipitation_norm min-max normalized precipitation
//   low_elevation      1 - clamp(elevation / (0.5 * max elevation), 0, 1)
//   geology_weakness   geology-code lookup
//   summer_dryness     stored layer, clamped to [0,1]
//   fault_proximity    stored layer, clamped to [0,1]
// Requires layers landcover, slope, precipitation, elevation, geology,
// summer_dryness, fault_proximity (NotFound names the first missing one).
std::vector<RasterLayer> build_factor_layers(const geo::CountryModel& model);

double fuel_for_landcover(int code);
double weakness_for_geology(int code);

inline constexpr double kSlopeNormCapDegrees = 35.0;

}  // namespace terratwin::hazard

#endif  // TERRATWIN_HAZARD_FACTORS_HPP_
