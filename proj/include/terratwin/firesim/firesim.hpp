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

#ifndef TERRATWIN_FIRESIM_FIRESIM_HPP_
#define TERRATWIN_FIRESIM_FIRESIM_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "terratwin/geomodel/country.hpp"
#include "terratwin/proximity/road_network.hpp"

namespace terratwin::firesim {

using geo::CellIndex;
using geo::RasterLayer;

enum class CellState : std::uint8_t {
  kUnburned = 0,
  kBurning = 1,
  kBurned = 2,
  kNonflammable = 3,
};

struct Wind {
  double speed_ms = 0.0;
  double direction_deg = 0.0;  // compass bearing the wind blows toward
};

enum class Mode { kDeterministic, kStochastic };
std::string_view mode_name(Mode m);

struct FireParams {
  double p0 = 0.6;
  Wind wind;
  double k_wind = 0.1;
  double k_slope = 1.0;
  int burn_duration = 2;  // steps a cell keeps burning
  Mode mode = Mode::kDeterministic;
  std::uint64_t seed = 0;  // stochastic mode only
  double minutes_per_step = 10.0;

  // Throws InvalidArgument naming the bad field.
  void validate() const;
};

struct FireState {
  int step;
  std::vector<CellState> cells;  // row-major
};

struct FireSimulation {
  geo::GridSpec spec;
  double minutes_per_step = 0.0;
  int max_steps = 0;
  // States from step 0 while at least one cell is burning.
  std::vector<FireState> states;

  double horizon_minutes() const { return max_steps * minutes_per_step; }
};

// Ignition probability for a burning cell spreading to a neighbour
// (dr, dc in {-1,0,1}) with the given neighbour fuel and elevation rise.
double spread_probability(const FireParams& p, double fuel_neighbor, int dr,
                          int dc, double rise_m, double cellsize);

// Cells with fuel <= 0 or nodata are nonflammable. Throws InvalidArgument
// for an ignition on a nonflammable or out-of-grid cell, an empty ignition
// list, misaligned layers or max_steps < 0.
FireSimulation simulate_fire(const RasterLayer& fuel,
                             const RasterLayer& elevation,
                             std::span<const CellIndex> ignition,
                             const FireParams& params, int max_steps);
// Fuel from the land-cover layer, slope from the elevation layer.
FireSimulation simulate_fire(const geo::CountryModel& model,
                             std::span<const CellIndex> ignition,
                             const FireParams& params, int max_steps);

// Flat indices (ascending) burning or burned at the last recorded step s
// with s * minutes_per_step <= t. Throws InvalidArgument for t < 0 or t past
// the horizon.
std::vector<std::size_t> burn_envelope(const FireSimulation& sim, double t_minutes);

// Step (in recorded-state terms) at which each cell first joins the
// envelope; -1 for cells that never do.
std::vector<int> ignition_steps(const FireSimulation& sim);

// State codes 0-3 of a recorded step as a raster.
RasterLayer state_raster(const FireSimulation& sim, std::size_t index);

struct EscapeRoute {
  bool feasible = false;
  std::vector<proximity::NodeId> nodes;
  double minutes = 0.0;
};

// Earliest-arrival walk from `start` to any node whose cell stays outside
// the final envelope; an edge departing at t is usable only if neither end
// cell is in the envelope at t + edge time. Times past the horizon use the
// final envelope. Infeasible (not an error) when the start is already in
// the envelope or no safe node can be reached.
EscapeRoute escape_route(const proximity::RoadNetwork& net,
                         proximity::NodeId start, const FireSimulation& sim,
                         double walk_speed_ms);

}  // namespace terratwin::firesim

#endif  // TERRATWIN_FIRESIM_FIRESIM_HPP_
