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

#ifndef TERRATWIN_ENGINE_SERVICES_HPP_
#define TERRATWIN_ENGINE_SERVICES_HPP_

#include <json.hpp>

#include "terratwin/engine/twin.hpp"
#include "terratwin/firesim/firesim.hpp"
#include "terratwin/scenario/placement.hpp"
#include "terratwin/scenario/pv.hpp"

// JSON requests and responses of the scenario and fire services. The HTTP
// server and the command-line tool both go through these functions. Bad
// request fields throw InvalidArgument.
namespace terratwin::engine {

using nlohmann::json;

json risk_json(const RiskAnswer& a);
json proximity_json(const ProximityAnswer& a);
json zonal_json(const landcover::ZonalReport& r);

// Config keys:
//   k                 sites to open (kmedian)
//   t_cover           minutes (cover, default 7.5)
//   t_mean            optional mean-time bound (kmedian)
//   objective         "mean" | "max"
//   candidates        node ids or [x, y] points; default: road nodes next
//                     to every amenity
//   demand            [{node | x,y, weight}]; default: region centres
//                     weighted by population (kmedian)
//   targets           node ids or points; default: region centres (cover)
//   speeds            {highway, primary, secondary, dirt} in km/h
scenario::PlacementProblem placement_problem(const Twin& twin, const json& config);
std::vector<proximity::NodeId> cover_targets(const Twin& twin, const json& config);
json placement_json(const Twin& twin, const scenario::Placement& p, std::string_view mode);
json run_kmedian(const Twin& twin, const json& config);
json run_cover(const Twin& twin, const json& config);

// Keys mirror PvConstraints fields; "max_zones" trims the ranked list.
scenario::PvConstraints pv_constraints(const json& config);
json run_pv(const Twin& twin, const json& config);

// Keys: ignite [[x, y], ...], steps (default 60), p0, wind {speed_ms,
// direction_deg}, k_wind, k_slope, burn_duration, mode ("deterministic" |
// "stochastic"), seed, minutes_per_step.
firesim::FireParams fire_params(const json& config);
std::vector<geo::CellIndex> ignition_cells(const Twin& twin, const json& config);
int fire_steps(const json& config);
firesim::FireSimulation run_fire_simulation(const Twin& twin, const json& config);
json fire_json(const firesim::FireSimulation& sim);
json run_fire(const Twin& twin, const json& config);
// Fire config plus start [x, y] and walk_speed_ms (default 1.4).
json run_escape(const Twin& twin, const json& config);

// Rough single-core runtime of a service call, used to decide whether the
// server answers inline or hands out a job id.
double estimate_seconds(std::string_view service, const Twin& twin, const json& config);

// NaN and infinities have no JSON form; they become null.
json number_or_null(double v);

}  // namespace terratwin::engine

#endif  // TERRATWIN_ENGINE_SERVICES_HPP_
