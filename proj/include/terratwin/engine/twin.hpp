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

#ifndef TERRATWIN_ENGINE_TWIN_HPP_
#define TERRATWIN_ENGINE_TWIN_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "terratwin/geomodel/country.hpp"
#include "terratwin/hazard/hazard.hpp"
#include "terratwin/landcover/landcover.hpp"
#include "terratwin/pipeline/catalog.hpp"
#include "terratwin/proximity/routing.hpp"
#include "terratwin/proximity/spatial_index.hpp"

namespace terratwin::engine {

// Risk pipeline settings shared by every front end.
inline constexpr double kDensityRadiusM = 1000.0;
inline constexpr double kIncidentWeight = 0.5;  // alpha in risk_score
inline constexpr int kAlertClass = 3;

// Named climate scenarios: "baseline" plus two warming pathways.
const std::vector<hazard::ClimateScenario>& builtin_scenarios();
// Throws NotFound for an unknown name.
const hazard::ClimateScenario& find_scenario(std::string_view name);

struct Assessment {
  geo::RasterLayer susceptibility;
  geo::RasterLayer density;
  geo::RasterLayer risk;
  geo::RasterLayer classes;
};

// Runs susceptibility -> density -> risk -> classes for one peril.
Assessment assess(const geo::CountryModel& model,
                  std::span<const geo::RasterLayer> factors, geo::Peril peril,
                  const hazard::ClimateScenario& scenario);

struct RiskAnswer {
  geo::Peril peril;
  int hazard_class;
  double score;
  std::string scenario;
};

struct ProximityAnswer {
  std::string kind;
  std::int64_t id;  // feature id, road edge index or water cell index
  double distance_m;
};

// Kinds accepted by Twin::proximity_at: every known feature kind name plus
// "road" and "water".
std::vector<std::string> proximity_kinds();

// Read-only view of one catalog version with the indexes and per-peril
// assessments the services need. Assessments are built on first use and
// cached; everything else is immutable after construction, so one Twin can
// serve concurrent requests.
class Twin {
 public:
  Twin(geo::CountryModel model, pipeline::LayerCatalog catalog,
       std::vector<pipeline::Reading> weather = {});

  // Loads the version CURRENT names.
  static std::shared_ptr<const Twin> open(const std::filesystem::path& root);

  const geo::CountryModel& model() const { return model_; }
  const geo::GridSpec& spec() const { return model_.spec; }
  const pipeline::LayerCatalog& catalog() const { return catalog_; }
  const std::string& version() const { return catalog_.version; }
  const std::vector<pipeline::Reading>& weather() const { return weather_; }
  const std::vector<geo::RasterLayer>& factors() const { return factors_; }
  const proximity::FeatureIndex& feature_index() const { return features_; }
  const geo::RasterLayer& grid_distance() const;

  const Assessment& assessment(geo::Peril peril,
                               const hazard::ClimateScenario& scenario) const;

  // Throws InvalidArgument outside the grid and DomainError on nodata.
  RiskAnswer risk_at(geo::Peril peril, geo::Point p,
                     const hazard::ClimateScenario& scenario) const;
  // Throws NotFound for an unknown kind, DomainError when it has no item.
  ProximityAnswer proximity_at(std::string_view kind, geo::Point p) const;
  // Throws NotFound for an id that is not a region.
  landcover::ZonalReport zonal(std::int64_t region_id) const;

  proximity::NodeId snap(geo::Point p) const { return locator_.snap(p); }
  // Region features with their population, in id order.
  std::vector<const geo::Feature*> regions() const;

 private:
  geo::CountryModel model_;
  pipeline::LayerCatalog catalog_;
  std::vector<pipeline::Reading> weather_;
  std::vector<geo::RasterLayer> factors_;
  proximity::FeatureIndex features_;
  proximity::SpatialIndex roads_;
  proximity::SpatialIndex water_edge_;
  proximity::NodeLocator locator_;
  geo::RasterLayer grid_distance_;
  bool has_grid_distance_ = false;

  mutable std::mutex mu_;
  mutable std::map<std::pair<geo::Peril, std::string>, std::unique_ptr<Assessment>>
      cache_;
};

}  // namespace terratwin::engine

#endif  // TERRATWIN_ENGINE_TWIN_HPP_
