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

#include "terratwin/engine/twin.hpp"

#include <algorithm>

#include "terratwin/common/error.hpp"
#include "terratwin/hazard/factors.hpp"
#include "terratwin/proximity/distance.hpp"

namespace terratwin::engine {

using geo::FeatureKind;
using geo::Peril;

const std::vector<hazard::ClimateScenario>& builtin_scenarios() {
  static const std::vector<hazard::ClimateScenario> all = {
      hazard::ClimateScenario::baseline(),
      hazard::ClimateScenario("warming_2050", {{Peril::kWildfire, 1.15},
                                               {Peril::kFlood, 1.10},
                                               {Peril::kLandslide, 1.05}}),
      hazard::ClimateScenario("warming_2100", {{Peril::kWildfire, 1.40},
                                               {Peril::kFlood, 1.25},
                                               {Peril::kLandslide, 1.15}}),
  };
  return all;
}

const hazard::ClimateScenario& find_scenario(std::string_view name) {
  for (const auto& s : builtin_scenarios()) {
    if (s.name() == name) return s;
  }
  throw NotFound("unknown scenario '" + std::string(name) + "'");
}

Assessment assess(const geo::CountryModel& model,
                  std::span<const geo::RasterLayer> factors, Peril peril,
                  const hazard::ClimateScenario& scenario) {
  Assessment a;
  a.susceptibility = hazard::susceptibility(factors, hazard::default_weights(peril));
  a.density = hazard::incident_density(model.events, peril, model.spec, kDensityRadiusM);
  a.risk = hazard::risk_score(a.susceptibility, a.density, kIncidentWeight, scenario, peril);
  a.classes = hazard::classify(a.risk);
  return a;
}

std::vector<std::string> proximity_kinds() {
  std::vector<std::string> out;
  for (FeatureKind k : geo::kKnownKinds) out.emplace_back(geo::kind_name(k));
  out.emplace_back("road");
  out.emplace_back("water");
  return out;
}

namespace {

geo::Polygon cell_square(const geo::GridSpec& s, geo::CellIndex c) {
  const double x0 = s.xll + c.col * s.cellsize;
  const double y0 = s.yll + (s.nrows - 1 - c.row) * s.cellsize;
  const double x1 = x0 + s.cellsize;
  const double y1 = y0 + s.cellsize;
  return geo::Polygon{{{{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}, {x0, y0}}}};
}

}  // namespace

Twin::Twin(geo::CountryModel model, pipeline::LayerCatalog catalog,
           std::vector<pipeline::Reading> weather)
    : model_(std::move(model)),
      catalog_(std::move(catalog)),
      weather_(std::move(weather)) {
  factors_ = hazard::build_factor_layers(model_);
  features_ = proximity::FeatureIndex(model_.features);

  std::vector<proximity::SpatialIndex::Item> edges;
  const auto& net = model_.roads;
  for (std::size_t i = 0; i < net.edges().size(); ++i) {
    const auto& e = net.edges()[i];
    const geo::Point a = net.node_at(net.require_index(e.a)).pos;
    const geo::Point b = net.node_at(net.require_index(e.b)).pos;
    edges.push_back({static_cast<std::int64_t>(i), geo::LineString{{a, b}}});
  }
  roads_ = proximity::SpatialIndex(std::move(edges));
  if (!net.empty()) locator_ = proximity::NodeLocator(net);

  // Water cells that touch land; a point on open water is answered directly.
  const auto& lc = model_.layer("landcover");
  const auto& s = model_.spec;
  std::vector<proximity::SpatialIndex::Item> shore;
  for (int r = 0; r < s.nrows; ++r) {
    for (int c = 0; c < s.ncols; ++c) {
      if (lc.at(r, c) != geo::landcover_code::kWater) continue;
      bool edge = false;
      for (auto [dr, dc] : {std::pair{-1, 0}, {1, 0}, {0, -1}, {0, 1}}) {
        const int rr = r + dr;
        const int cc = c + dc;
        if (s.in_bounds(rr, cc) && lc.at(rr, cc) != geo::landcover_code::kWater) edge = true;
      }
      if (edge) {
        shore.push_back({static_cast<std::int64_t>(s.flat({r, c})), cell_square(s, {r, c})});
      }
    }
  }
  water_edge_ = proximity::SpatialIndex(std::move(shore));

  if (!model_.features.of_kind(FeatureKind::kGridLine).empty()) {
    grid_distance_ = proximity::distance_layer(model_.spec, model_.features,
                                               FeatureKind::kGridLine);
    has_grid_distance_ = true;
  }
}

std::shared_ptr<const Twin> Twin::open(const std::filesystem::path& root) {
  pipeline::LoadedModel loaded = pipeline::load_model(root);
  return std::make_shared<const Twin>(std::move(loaded.model), std::move(loaded.catalog),
                                      std::move(loaded.weather));
}

const geo::RasterLayer& Twin::grid_distance() const {
  if (!has_grid_distance_) throw NotFound("missing feature class 'grid_line'");
  return grid_distance_;
}

const Assessment& Twin::assessment(Peril peril,
                                   const hazard::ClimateScenario& scenario) const {
  std::lock_guard<std::mutex> lock(mu_);
  // Keyed by content: a scenario file may reuse a built-in name.
  auto& slot = cache_[{peril, hazard::format_scenario(scenario)}];
  if (!slot) slot = std::make_unique<Assessment>(assess(model_, factors_, peril, scenario));
  return *slot;
}

RiskAnswer Twin::risk_at(Peril peril, geo::Point p,
                         const hazard::ClimateScenario& scenario) const {
  const auto cell = model_.spec.cell_of(p);
  if (!cell) throw InvalidArgument("point outside the grid");
  const Assessment& a = assessment(peril, scenario);
  if (a.classes.is_nodata(*cell)) throw DomainError("no data at point");
  return {peril, static_cast<int>(a.classes.at(*cell)), a.risk.at(*cell), scenario.name()};
}

ProximityAnswer Twin::proximity_at(std::string_view kind, geo::Point p) const {
  if (!model_.spec.contains(p)) throw InvalidArgument("point outside the grid");
  proximity::NearestHit hit;
  if (kind == "road") {
    if (roads_.empty()) throw DomainError("empty class: road");
    hit = roads_.nearest(p);
  } else if (kind == "water") {
    const auto cell = model_.spec.cell_of(p);
    if (model_.layer("landcover").at(*cell) == geo::landcover_code::kWater) {
      hit = {static_cast<std::int64_t>(model_.spec.flat(*cell)), 0.0};
    } else {
      if (water_edge_.empty()) throw DomainError("empty class: water");
      hit = water_edge_.nearest(p);
    }
  } else {
    const auto k = geo::parse_kind(kind);
    if (!k) throw NotFound("unknown proximity kind '" + std::string(kind) + "'");
    hit = features_.nearest(p, *k);
  }
  return {std::string(kind), hit.id, hit.distance};
}

landcover::ZonalReport Twin::zonal(std::int64_t region_id) const {
  const geo::Feature* f = model_.features.find(region_id);
  if (!f || f->kind != FeatureKind::kRegion) {
    throw NotFound("unknown region " + std::to_string(region_id));
  }
  return landcover::zonal_report(*f, model_.features, model_.layer("landcover"));
}

std::vector<const geo::Feature*> Twin::regions() const {
  auto out = model_.features.of_kind(FeatureKind::kRegion);
  std::sort(out.begin(), out.end(),
            [](const geo::Feature* a, const geo::Feature* b) { return a->id < b->id; });
  return out;
}

}  // namespace terratwin::engine
