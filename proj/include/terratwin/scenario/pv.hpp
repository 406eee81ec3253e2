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

#ifndef TERRATWIN_SCENARIO_PV_HPP_
#define TERRATWIN_SCENARIO_PV_HPP_

#include <cstddef>
#include <string_view>
#include <vector>

#include "terratwin/geomodel/country.hpp"

namespace terratwin::scenario {

struct PvConstraints {
  double max_slope_deg = 10.0;
  std::vector<int> allowed_landcover = {geo::landcover_code::kBare,
                                        geo::landcover_code::kShrub,
                                        geo::landcover_code::kCropland};
  double max_grid_distance_m = 3000.0;
  double min_area_m2 = 200000.0;
  double w_insolation = 0.5;
  double w_flatness = 0.3;
  double w_grid = 0.2;

  // Throws InvalidArgument naming the bad field.
  void validate() const;
};

struct PvZone {
  int component_id;            // discovery order in a row-major scan
  geo::Polygon outline;        // cell-edge boundary, outer ring first
  std::vector<std::size_t> cells;  // flat indices, ascending
  double area_m2;
  double score;                // mean per-cell score
};

// Cells passing every hard constraint (slope, land cover, protected mask,
// grid distance) grouped into 4-connected zones no smaller than
// min_area_m2, ranked by score (then larger area, then smaller component
// id). Needs layers slope, landcover, insolation, protected_mask and at
// least one grid_line feature; throws NotFound naming what is missing.
std::vector<PvZone> site_pv(const geo::CountryModel& model,
                            const PvConstraints& c);
// Same with a precomputed grid-line distance layer.
std::vector<PvZone> site_pv(const geo::CountryModel& model,
                            const PvConstraints& c,
                            const geo::RasterLayer& grid_distance);

// Boundary of a 4-connected cell set as a polygon: one counter-clockwise
// outer ring followed by clockwise holes, collinear vertices removed.
geo::Polygon trace_outline(const geo::GridSpec& spec,
                           const std::vector<std::size_t>& cells);

}  // namespace terratwin::scenario

#endif  // TERRATWIN_SCENARIO_PV_HPP_
