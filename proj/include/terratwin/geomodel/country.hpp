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

#ifndef TERRATWIN_GEOMODEL_COUNTRY_HPP_
#define TERRATWIN_GEOMODEL_COUNTRY_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "terratwin/geomodel/events.hpp"
#include "terratwin/geomodel/feature.hpp"
#include "terratwin/geomodel/grid.hpp"
#include "terratwin/proximity/road_network.hpp"

namespace terratwin::geo {

// Land-cover codes used by the generator and the land-cover services.
namespace landcover_code {
inline constexpr int kWater = 0;
inline constexpr int kBare = 1;
inline constexpr int kShrub = 2;
inline constexpr int kForest = 3;
inline constexpr int kCropland = 4;
inline constexpr int kBuilt = 5;
}  // namespace landcover_code

struct GeneratorParams {
  // Terrain.
  int octaves = 4;
  double persistence = 0.5;
  double base_wavelength_m = 8000.0;
  double max_elevation_m = 1900.0;
  // Land heights are raised to this power: flat coastal plains around a
  // steep central massif.
  double relief_exponent = 2.5;
  double sea_threshold = 0.22;  // normalized height below which cells are sea

  // Settlements and infrastructure.
  int settlements = 14;
  int shortcut_edges = 6;
  double road_node_spacing_m = 400.0;
  int amenities_per_settlement = 6;
  int pools_per_settlement = 25;
  int buildings_per_settlement = 40;
  int beaches = 24;
  int protected_zones = 3;
  int trees = 3000;

  // Historical hazard events.
  int events_per_peril = 300;
  double event_sharpness = 12.0;  // gamma in P(cell) ~ susceptibility^gamma
  int first_event_year = 2015;
  int event_years = 10;

  // Year stamped on every dataset of a fresh model.
  int data_year = 2025;

  // Throws InvalidArgument naming the offending field.
  void validate() const;
  friend bool operator==(const GeneratorParams&,
                         const GeneratorParams&) = default;
};

struct CountryModel {
  GridSpec spec;
  std::map<std::string, RasterLayer> layers;
  FeatureCollection features;
  proximity::RoadNetwork roads;
  std::vector<HazardEvent> events;
  std::uint64_t seed = 0;
  GeneratorParams params;

  // Throws NotFound("missing layer '<name>'").
  const RasterLayer& layer(const std::string& name) const;
  bool has_layer(const std::string& name) const {
    return layers.count(name) != 0;
  }
  // Inserts or replaces; throws InvalidArgument if misaligned.
  void put_layer(RasterLayer layer);

  friend bool operator==(const CountryModel&, const CountryModel&) = default;
};

// Deterministic in (seed, spec, params). Every stored real is quantized so
// that writing and re-reading the model reproduces it exactly.
CountryModel generate_country(std::uint64_t seed, const GridSpec& spec,
                              const GeneratorParams& params = {});

// Default desk-scale frame: 256x256 cells of 100 m.
GridSpec default_grid(int size = 256, double cellsize = 100.0);

}  // namespace terratwin::geo

#endif  // TERRATWIN_GEOMODEL_COUNTRY_HPP_
