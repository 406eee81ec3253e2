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

#include "terratwin/engine/services.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "terratwin/common/error.hpp"

namespace terratwin::engine {

using geo::FeatureKind;
using proximity::NodeId;

namespace {

void require_object(const json& config) {
  if (!config.is_object()) throw InvalidArgument("request body must be a JSON object");
}

template <class T>
T get_or(const json& c, const char* key, T fallback) {
  auto it = c.find(key);
  if (it == c.end() || it->is_null()) return fallback;
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw InvalidArgument(std::string("field '") + key + "' has the wrong type");
  }
}

geo::Point point_of(const json& j, const char* what) {
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  if (j.is_object() && j.contains("x") && j.contains("y") && j["x"].is_number() &&
      j["y"].is_number()) {
    return {j["x"].get<double>(), j["y"].get<double>()};
  }
  throw InvalidArgument(std::string(what) + " must be [x, y]");
}

// A node id, or a point snapped to the nearest road node.
NodeId node_of(const Twin& twin, const json& j, const char* what) {
  if (j.is_number_integer()) {
    const NodeId id = j.get<NodeId>();
    twin.model().roads.require_index(id);
    return id;
  }
  return twin.snap(point_of(j, what));
}

std::vector<NodeId> node_list(const Twin& twin, const json& j, const char* what) {
  if (!j.is_array()) throw InvalidArgument(std::string("field '") + what + "' must be a list");
  std::vector<NodeId> out;
  for (const auto& e : j) out.push_back(node_of(twin, e, what));
  return out;
}

std::vector<NodeId> sorted_unique(std::vector<NodeId> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

std::vector<NodeId> default_candidates(const Twin& twin) {
  std::vector<NodeId> out;
  for (FeatureKind k : {FeatureKind::kAmenitySupermarket, FeatureKind::kAmenityHospital,
                        FeatureKind::kAmenityPharmacy, FeatureKind::kAmenitySchool}) {
    for (const geo::Feature* f : twin.model().features.of_kind(k)) {
      if (const auto* p = std::get_if<geo::Point>(&f->geometry)) out.push_back(twin.snap(*p));
    }
  }
  return sorted_unique(std::move(out));
}

std::vector<scenario::Demand> default_demand(const Twin& twin) {
  std::vector<scenario::Demand> out;
  for (const geo::Feature* f : twin.regions()) {
    const auto& poly = std::get<geo::Polygon>(f->geometry);
    out.push_back({twin.snap(geo::centroid(poly)), f->number("population").value_or(1.0)});
  }
  return out;
}

proximity::SpeedTable speeds_of(const json& config) {
  proximity::SpeedTable s;
  auto it = config.find("speeds");
  if (it == config.end() || it->is_null()) return s;
  if (!it->is_object()) throw InvalidArgument("field 'speeds' must be an object");
  s.highway = get_or(*it, "highway", s.highway);
  s.primary = get_or(*it, "primary", s.primary);
  s.secondary = get_or(*it, "secondary", s.secondary);
  s.dirt = get_or(*it, "dirt", s.dirt);
  for (double v : {s.highway, s.primary, s.secondary, s.dirt}) {
    if (!(v > 0.0) || !std::isfinite(v)) throw InvalidArgument("speeds must be positive");
  }
  return s;
}

json point_json(geo::Point p) { return json::array({p.x, p.y}); }

json node_point(const Twin& twin, NodeId id) {
  const auto& net = twin.model().roads;
  return point_json(net.node_at(net.require_index(id)).pos);
}

}  // namespace

json number_or_null(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

json risk_json(const RiskAnswer& a) {
  return {{"peril", geo::peril_name(a.peril)},
          {"class", a.hazard_class},
          {"label", hazard::class_label(a.hazard_class)},
          {"score", a.score},
          {"scenario", a.scenario}};
}

json proximity_json(const ProximityAnswer& a) {
  return {{"kind", a.kind}, {"id", a.id}, {"distance_m", a.distance_m}};
}

json zonal_json(const landcover::ZonalReport& r) {
  return json::parse(landcover::format_zonal_report(r));
}

scenario::PlacementProblem placement_problem(const Twin& twin, const json& config) {
  require_object(config);
  scenario::PlacementProblem p;
  p.net = &twin.model().roads;
  p.k = get_or(config, "k", 1);
  p.t_cover = get_or(config, "t_cover", scenario::kDefaultCoverMinutes);
  if (config.contains("t_mean") && !config["t_mean"].is_null()) {
    p.t_mean = get_or(config, "t_mean", 0.0);
  }
  const std::string objective = get_or(config, "objective", std::string("mean"));
  if (objective == "mean") {
    p.objective = scenario::Objective::kMean;
  } else if (objective == "max") {
    p.objective = scenario::Objective::kMax;
  } else {
    throw InvalidArgument("objective must be 'mean' or 'max'");
  }
  p.speeds = speeds_of(config);
  p.candidates = config.contains("candidates")
                     ? sorted_unique(node_list(twin, config["candidates"], "candidates"))
                     : default_candidates(twin);
  if (config.contains("demand")) {
    const json& d = config["demand"];
    if (!d.is_array()) throw InvalidArgument("field 'demand' must be a list");
    for (const auto& e : d) {
      if (!e.is_object()) throw InvalidArgument("demand entries must be objects");
      const NodeId node = e.contains("node") ? node_of(twin, e["node"], "demand node")
                                             : twin.snap(point_of(e, "demand point"));
      p.demand.push_back({node, get_or(e, "weight", 1.0)});
    }
  } else {
    p.demand = default_demand(twin);
  }
  return p;
}

std::vector<NodeId> cover_targets(const Twin& twin, const json& config) {
  require_object(config);
  if (config.contains("targets")) return node_list(twin, config["targets"], "targets");
  std::vector<NodeId> out;
  for (const auto& d : default_demand(twin)) out.push_back(d.node);
  return out;
}

json placement_json(const Twin& twin, const scenario::Placement& p, std::string_view mode) {
  json chosen_points = json::array();
  for (NodeId id : p.chosen) chosen_points.push_back(node_point(twin, id));
  json assignment = json::array();
  for (const auto& a : p.assignment) {
    assignment.push_back({{"node", a.node},
                          {"site", a.site ? json(*a.site) : json(nullptr)},
                          {"minutes", number_or_null(a.minutes)}});
  }
  return {{"mode", mode},
          {"chosen", p.chosen},
          {"chosen_points", chosen_points},
          {"objective", number_or_null(p.objective)},
          {"feasible", p.feasible},
          {"assignment", assignment},
          {"uncoverable", p.uncoverable}};
}

json run_kmedian(const Twin& twin, const json& config) {
  const auto p = placement_problem(twin, config);
  return placement_json(twin, scenario::solve_kmedian(p), "kmedian");
}

json run_cover(const Twin& twin, const json& config) {
  const auto p = placement_problem(twin, config);
  const auto targets = cover_targets(twin, config);
  json out = placement_json(twin, scenario::solve_cover(p, targets), "cover");
  out["t_cover"] = p.t_cover;
  return out;
}

scenario::PvConstraints pv_constraints(const json& config) {
  require_object(config);
  scenario::PvConstraints c;
  c.max_slope_deg = get_or(config, "max_slope_deg", c.max_slope_deg);
  c.allowed_landcover = get_or(config, "allowed_landcover", c.allowed_landcover);
  c.max_grid_distance_m = get_or(config, "max_grid_distance_m", c.max_grid_distance_m);
  c.min_area_m2 = get_or(config, "min_area_m2", c.min_area_m2);
  c.w_insolation = get_or(config, "w_insolation", c.w_insolation);
  c.w_flatness = get_or(config, "w_flatness", c.w_flatness);
  c.w_grid = get_or(config, "w_grid", c.w_grid);
  c.validate();
  return c;
}

json run_pv(const Twin& twin, const json& config) {
  const auto c = pv_constraints(config);
  const auto zones = scenario::site_pv(twin.model(), c, twin.grid_distance());
  const auto max_zones = get_or<std::size_t>(config, "max_zones", zones.size());
  json out = json::array();
  for (std::size_t i = 0; i < zones.size() && i < max_zones; ++i) {
    const auto& z = zones[i];
    json rings = json::array();
    for (const auto& ring : z.outline.rings) {
      json r = json::array();
      for (geo::Point p : ring) r.push_back(point_json(p));
      rings.push_back(std::move(r));
    }
    out.push_back({{"rank", i + 1},
                   {"component_id", z.component_id},
                   {"area_m2", z.area_m2},
                   {"score", z.score},
                   {"cells", z.cells.size()},
                   {"outline", rings}});
  }
  return {{"zones", out}, {"total_zones", zones.size()}};
}

firesim::FireParams fire_params(const json& config) {
  require_object(config);
  firesim::FireParams p;
  p.p0 = get_or(config, "p0", p.p0);
  if (config.contains("wind") && !config["wind"].is_null()) {
    const json& w = config["wind"];
    if (!w.is_object()) throw InvalidArgument("field 'wind' must be an object");
    p.wind.speed_ms = get_or(w, "speed_ms", 0.0);
    p.wind.direction_deg = get_or(w, "direction_deg", 0.0);
  }
  p.k_wind = get_or(config, "k_wind", p.k_wind);
  p.k_slope = get_or(config, "k_slope", p.k_slope);
  p.burn_duration = get_or(config, "burn_duration", p.burn_duration);
  const std::string mode = get_or(config, "mode", std::string("deterministic"));
  if (mode == "deterministic") {
    p.mode = firesim::Mode::kDeterministic;
  } else if (mode == "stochastic") {
    p.mode = firesim::Mode::kStochastic;
  } else {
    throw InvalidArgument("mode must be 'deterministic' or 'stochastic'");
  }
  p.seed = get_or<std::uint64_t>(config, "seed", 0);
  p.minutes_per_step = get_or(config, "minutes_per_step", p.minutes_per_step);
  p.validate();
  return p;
}

std::vector<geo::CellIndex> ignition_cells(const Twin& twin, const json& config) {
  require_object(config);
  if (!config.contains("ignite")) throw InvalidArgument("field 'ignite' is required");
  const json& ig = config["ignite"];
  std::vector<geo::Point> points;
  if (ig.is_array() && ig.size() == 2 && ig[0].is_number()) {
    points.push_back(point_of(ig, "ignite"));
  } else if (ig.is_array()) {
    for (const auto& e : ig) points.push_back(point_of(e, "ignite"));
  } else {
    throw InvalidArgument("field 'ignite' must be [x, y] or a list of them");
  }
  std::vector<geo::CellIndex> cells;
  for (geo::Point p : points) {
    const auto c = twin.spec().cell_of(p);
    if (!c) throw InvalidArgument("ignition point outside the grid");
    cells.push_back(*c);
  }
  return cells;
}

int fire_steps(const json& config) {
  require_object(config);
  const int steps = get_or(config, "steps", 60);
  if (steps < 0 || steps > 100000) throw InvalidArgument("steps must be in 0..100000");
  return steps;
}

firesim::FireSimulation run_fire_simulation(const Twin& twin, const json& config) {
  const auto params = fire_params(config);
  const auto cells = ignition_cells(twin, config);
  return firesim::simulate_fire(twin.model(), cells, params, fire_steps(config));
}

json fire_json(const firesim::FireSimulation& sim) {
  const auto steps = firesim::ignition_steps(sim);
  std::size_t reached = 0;
  for (int s : steps) reached += s >= 0;
  return {{"ncols", sim.spec.ncols},
          {"nrows", sim.spec.nrows},
          {"states", sim.states.size()},
          {"max_steps", sim.max_steps},
          {"minutes_per_step", sim.minutes_per_step},
          {"horizon_minutes", sim.horizon_minutes()},
          {"cells_reached", reached},
          {"ignition_steps", steps}};
}

json run_fire(const Twin& twin, const json& config) {
  return fire_json(run_fire_simulation(twin, config));
}

json run_escape(const Twin& twin, const json& config) {
  require_object(config);
  if (!config.contains("start")) throw InvalidArgument("field 'start' is required");
  const NodeId start = node_of(twin, config["start"], "start");
  const double walk = get_or(config, "walk_speed_ms", 1.4);
  if (!(walk > 0.0) || !std::isfinite(walk)) throw InvalidArgument("walk_speed_ms must be positive");
  const auto sim = run_fire_simulation(twin, config);
  const auto route = firesim::escape_route(twin.model().roads, start, sim, walk);
  json points = json::array();
  for (NodeId id : route.nodes) points.push_back(node_point(twin, id));
  json out = fire_json(sim);
  out["route"] = {{"feasible", route.feasible},
                  {"start", start},
                  {"nodes", route.nodes},
                  {"points", points},
                  {"minutes", route.feasible ? json(route.minutes) : json(nullptr)}};
  return out;
}

double estimate_seconds(std::string_view service, const Twin& twin, const json& config) {
  const double nodes = static_cast<double>(std::max<std::size_t>(twin.model().roads.node_count(), 2));
  const double dijkstra = nodes * std::log2(nodes) * 6e-8;
  const double cells = static_cast<double>(twin.spec().cell_count());
  const auto count = [&](const char* key, double fallback) {
    auto it = config.find(key);
    return it != config.end() && it->is_array() ? static_cast<double>(it->size()) : fallback;
  };
  if (service == "kmedian" || service == "cover") {
    const double cand = count("candidates", 80.0);
    const double demand = count(service == "cover" ? "targets" : "demand", 20.0);
    const double k = get_or(config, "k", 1.0);
    return cand * dijkstra + k * cand * cand * demand * 4e-9;
  }
  if (service == "pv") return cells * 4e-7;
  if (service == "fire" || service == "escape") {
    const double steps = get_or(config, "steps", 60.0);
    return cells * 2e-8 * steps + (service == "escape" ? dijkstra * 4 : 0.0);
  }
  return 0.0;
}

}  // namespace terratwin::engine
