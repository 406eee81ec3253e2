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

#include "terratwin/server/ledger.hpp"

#include <algorithm>

namespace terratwin::server {

namespace {
constexpr std::string_view kRoleNames[] = {"bank_insurance", "real_estate",
                                           "property_owner", "municipality",
                                           "farmer",         "forestry",
                                           "other"};
}

std::string_view role_name(Role r) { return kRoleNames[static_cast<int>(r)]; }

Role parse_role(std::string_view name) {
  for (std::size_t i = 0; i < kNamedRoles; ++i) {
    if (kRoleNames[i] == name) return static_cast<Role>(i);
  }
  return Role::kOther;
}

Heatmap usage_heatmap(const CountMatrix& counts) {
  Heatmap out{};
  for (std::size_t r = 0; r < kNamedRoles; ++r) {
    const std::uint64_t top = *std::max_element(counts[r].begin(), counts[r].end());
    if (top == 0) continue;
    for (std::size_t c = 0; c < kCategories; ++c) {
      out[r][c] = static_cast<double>(counts[r][c]) / static_cast<double>(top);
    }
  }
  return out;
}

void UsageLedger::record(Role role, Category category) {
  cells_[static_cast<int>(role)][static_cast<int>(category)].fetch_add(
      1, std::memory_order_relaxed);
}

std::uint64_t UsageLedger::count(Role role, Category category) const {
  return cells_[static_cast<int>(role)][static_cast<int>(category)].load(
      std::memory_order_relaxed);
}

CountMatrix UsageLedger::counts() const {
  CountMatrix m{};
  for (std::size_t r = 0; r < kNamedRoles; ++r) {
    for (std::size_t c = 0; c < kCategories; ++c) {
      m[r][c] = cells_[r][c].load(std::memory_order_relaxed);
    }
  }
  return m;
}

const std::vector<ServiceDescriptor>& service_catalog() {
  using C = Category;
  static const std::vector<ServiceDescriptor> all = {
      {"land_cover_map", "Land cover map", C::kLandCover, "GET", "/api/v1/layers/landcover", true},
      {"land_use_change", "Land use change and species spread", C::kLandCover, "POST",
       "/api/v1/landcover/spread", true},
      {"swimming_pools", "Swimming pool detection", C::kLandCover, "GET",
       "/api/v1/zonal/{region_id}", true},
      {"buildings", "Building detection", C::kLandCover, "GET", "/api/v1/zonal/{region_id}", true},
      {"vegetation", "Vegetation nearby", C::kLandCover, "GET", "/api/v1/zonal/{region_id}", true},
      {"tree_counting", "Tree counting", C::kLandCover, "GET", "/api/v1/zonal/{region_id}", true},
      {"tree_classification", "Tree species classification", C::kLandCover, "GET",
       "/api/v1/layers/species", true},
      {"burnt_areas", "Burnt areas nearby", C::kLandCover, "GET", "", false},
      {"crop_classification", "Crop classification", C::kLandCover, "GET", "", false},
      {"elevation", "Elevation", C::kLandform, "GET", "/api/v1/layers/elevation", true},
      {"slope", "Slope", C::kLandform, "GET", "/api/v1/layers/slope", true},
      {"aspect", "Aspect", C::kLandform, "GET", "/api/v1/layers/aspect", true},
      {"geology", "Geology", C::kLandform, "GET", "/api/v1/layers/geology", true},
      {"wildfire_risk", "Wildfire risk", C::kGeohazard, "GET", "/api/v1/risk/wildfire", true},
      {"flood_risk", "Flood risk", C::kGeohazard, "GET", "/api/v1/risk/flood", true},
      {"landslide_risk", "Landslide risk", C::kGeohazard, "GET", "/api/v1/risk/landslide", true},
      {"earthquake_risk", "Earthquake risk", C::kGeohazard, "GET", "/api/v1/risk/earthquake", true},
      {"subsidence_risk", "Land subsidence risk", C::kGeohazard, "GET",
       "/api/v1/risk/subsidence", true},
      {"precipitation", "Precipitation", C::kClimateWeather, "GET",
       "/api/v1/layers/precipitation", true},
      {"weather_records", "Weather station records", C::kClimateWeather, "GET",
       "/api/v1/weather/{station}", true},
      {"road_proximity", "Proximity to roads", C::kProximity, "GET", "/api/v1/proximity/road", true},
      {"sea_proximity", "Proximity to the sea", C::kProximity, "GET", "/api/v1/proximity/water", true},
      {"blue_flag_proximity", "Proximity to blue-flag beaches", C::kProximity, "GET",
       "/api/v1/proximity/blue_flag_beach", true},
      {"amenity_proximity", "Proximity to amenities", C::kProximity, "GET",
       "/api/v1/proximity/{kind}", true},
      {"electricity_proximity", "Proximity to the electricity network", C::kProximity, "GET",
       "/api/v1/proximity/grid_line", true},
      {"protected_area_proximity", "Proximity to protected areas", C::kProximity, "GET",
       "/api/v1/proximity/protected_zone", true},
      {"service_27", "Unnamed service", C::kLandform, "GET", "", false},
  };
  return all;
}

}  // namespace terratwin::server
