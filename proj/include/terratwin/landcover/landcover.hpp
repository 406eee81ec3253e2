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

#ifndef TERRATWIN_LANDCOVER_LANDCOVER_HPP_
#define TERRATWIN_LANDCOVER_LANDCOVER_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "terratwin/geomodel/feature.hpp"
#include "terratwin/geomodel/grid.hpp"

namespace terratwin::landcover {

using geo::RasterLayer;

struct ZonalReport {
  std::int64_t region_id = 0;
  std::map<std::string, std::int64_t> counts;          // by feature kind
  std::map<std::string, std::int64_t> species_counts;  // trees by species
  double pool_volume_m3 = 0.0;
  double building_area_m2 = 0.0;
  double veg_fraction = 0.0;
  double built_fraction = 0.0;

  friend bool operator==(const ZonalReport&, const ZonalReport&) = default;
};

// Land-cover codes counted as vegetation (forest, shrub, cropland) or built.
bool is_vegetation(int code);
bool is_built(int code);

// Point features are counted when the region contains them (boundary
// included); polygon features by their centroid; line features are skipped,
// as is the region itself. Fractions are shares of the cells whose centers
// lie in the region. Throws InvalidArgument for a non-polygon or zero-area
// region.
ZonalReport zonal_report(const geo::Feature& region,
                         const geo::FeatureCollection& features,
                         const RasterLayer& landcover);

struct Epoch {
  int year;
  RasterLayer species;    // categorical species codes, 0 = none
  RasterLayer landcover;  // land-cover codes
};

class EpochStack {
 public:
  // Throws InvalidArgument when rasters are misaligned or years do not
  // strictly increase.
  explicit EpochStack(std::vector<Epoch> epochs);
  const std::vector<Epoch>& epochs() const { return epochs_; }
  std::size_t size() const { return epochs_.size(); }

 private:
  std::vector<Epoch> epochs_;
};

struct ChangePoint {
  int year;
  double veg_fraction;
  double built_fraction;
  friend bool operator==(const ChangePoint&, const ChangePoint&) = default;
};

// One point per epoch, fractions as in zonal_report. Needs >= 2 epochs.
std::vector<ChangePoint> change_series(const geo::Feature& region,
                                       const EpochStack& epochs);

// Mean distance (m) from each cell newly occupied by `species` in B to the
// nearest cell occupied in A, divided by `years`. Returns 0 when B adds no
// cells. Throws DomainError("no source population") when A has none and
// InvalidArgument for years <= 0 or misaligned rasters.
double spread_velocity(const RasterLayer& epoch_a, const RasterLayer& epoch_b,
                       int species, double years);
double spread_velocity(const RasterLayer& epoch_a, const RasterLayer& epoch_b,
                       std::string_view species, double years);

// Exact squared euclidean distance, in cells, from every cell to the
// nearest marked cell (infinity when nothing is marked).
std::vector<double> squared_distance_transform(const std::vector<bool>& marked,
                                               int nrows, int ncols);

std::string format_zonal_report(const ZonalReport& r);
ZonalReport parse_zonal_report(std::string_view json_text);

}  // namespace terratwin::landcover

#endif  // TERRATWIN_LANDCOVER_LANDCOVER_HPP_
