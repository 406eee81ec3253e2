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

#include "terratwin/firesim/firesim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>

#include "terratwin/common/error.hpp"
#include "terratwin/common/rng.hpp"
#include "terratwin/hazard/factors.hpp"
#include "terratwin/proximity/routing.hpp"

namespace terratwin::firesim {

namespace {

constexpr int kNeighbors[8][2] = {{-1, -1}, {-1, 0}, {-1, 1}, {0, -1},
                                  {0, 1},   {1, -1}, {1, 0},  {1, 1}};

double deg2rad(double d) { return d * std::numbers::pi / 180.0; }

// Largest recorded step s with s * minutes <= t, clamped to the last state.
int step_at(const FireSimulation& sim, double t) {
  const double m = sim.minutes_per_step;
  auto s = static_cast<long long>(std::floor(t / m));
  while ((s + 1) * m <= t) ++s;
  while (s > 0 && s * m > t) --s;
  const auto last = static_cast<long long>(sim.states.size()) - 1;
  return static_cast<int>(std::clamp(s, 0LL, last));
}

}  // namespace

std::string_view mode_name(Mode m) {
  return m == Mode::kStochastic ? "stochastic" : "deterministic";
}

void FireParams::validate() const {
  auto fail = [](const char* field, const char* rule) {
    throw InvalidArgument(std::string("fire parameter '") + field + "' " + rule);
  };
  if (!(p0 >= 0.0 && p0 <= 1.0)) fail("p0", "must be in [0,1]");
  if (!(wind.speed_ms >= 0.0) || !std::isfinite(wind.speed_ms))
    fail("wind_speed", "must be finite and >= 0");
  if (!std::isfinite(wind.direction_deg)) fail("wind_direction", "must be finite");
  if (!(k_wind >= 0.0) || !std::isfinite(k_wind)) fail("k_wind", "must be finite and >= 0");
  if (!(k_slope >= 0.0) || !std::isfinite(k_slope)) fail("k_slope", "must be finite and >= 0");
  if (burn_duration < 1) fail("burn_duration", "must be >= 1");
  if (!(minutes_per_step > 0.0)) fail("minutes_per_step", "must be > 0");
}

double spread_probability(const FireParams& p, double fuel_neighbor, int dr,
                          int dc, double rise_m, double cellsize) {
  // Compass bearing of the neighbour in whole degrees (rows grow
  // southward). Differencing in degrees keeps rotated runs bit-identical.
  static constexpr double kBearing[3][3] = {
      {315.0, 0.0, 45.0}, {270.0, 0.0, 90.0}, {225.0, 180.0, 135.0}};
  const double toward = kBearing[dr + 1][dc + 1];
  const double wind = std::exp(p.k_wind * p.wind.speed_ms *
                               std::cos(deg2rad(std::remainder(p.wind.direction_deg - toward, 360.0))));
  const double run = (dr != 0 && dc != 0) ? cellsize * std::numbers::sqrt2 : cellsize;
  const double slope = std::exp(p.k_slope * (rise_m / run));
  return std::clamp(p.p0 * fuel_neighbor * wind * slope, 0.0, 1.0);
}

FireSimulation simulate_fire(const RasterLayer& fuel,
                             const RasterLayer& elevation,
                             std::span<const CellIndex> ignition,
                             const FireParams& params, int max_steps) {
  params.validate();
  if (max_steps < 0) throw InvalidArgument("max_steps must be >= 0");
  if (ignition.empty()) throw InvalidArgument("ignition list is empty");
  const geo::GridSpec& spec = fuel.spec();
  geo::require_aligned(spec, elevation);
  const auto fv = fuel.values();
  const auto ev = elevation.values();
  const std::size_t n = spec.cell_count();

  std::vector<CellState> cells(n, CellState::kUnburned);
  for (std::size_t k = 0; k < n; ++k) {
    if (fv[k] == spec.nodata || !(fv[k] > 0.0)) cells[k] = CellState::kNonflammable;
  }
  std::vector<int> age(n, 0);
  for (const CellIndex& c : ignition) {
    if (!spec.in_bounds(c.row, c.col)) {
      throw InvalidArgument("ignition cell (" + std::to_string(c.row) + "," +
                            std::to_string(c.col) + ") is outside the grid");
    }
    const std::size_t k = spec.flat(c);
    if (cells[k] == CellState::kNonflammable) {
      throw InvalidArgument("ignition cell (" + std::to_string(c.row) + "," +
                            std::to_string(c.col) + ") is not flammable");
    }
    cells[k] = CellState::kBurning;
  }

  FireSimulation sim;
  sim.spec = spec;
  sim.minutes_per_step = params.minutes_per_step;
  sim.max_steps = max_steps;
  sim.states.push_back({0, cells});
  Rng rng(params.seed);
  std::vector<CellState> next;
  for (int step = 1; step <= max_steps; ++step) {
    next = cells;
    for (int r = 0; r < spec.nrows; ++r) {
      for (int c = 0; c < spec.ncols; ++c) {
        const std::size_t k = spec.flat({r, c});
        if (cells[k] != CellState::kBurning) continue;
        for (const auto& d : kNeighbors) {
          const int nr = r + d[0], nc = c + d[1];
          if (!spec.in_bounds(nr, nc)) continue;
          const std::size_t j = spec.flat({nr, nc});
          if (cells[j] != CellState::kUnburned) continue;
          const bool have_z = ev[k] != spec.nodata && ev[j] != spec.nodata;
          const double p = spread_probability(params, fv[j], d[0], d[1],
                                              have_z ? ev[j] - ev[k] : 0.0,
                                              spec.cellsize);
          const bool ignite = params.mode == Mode::kDeterministic
                                  ? p >= 0.5
                                  : rng.uniform() < p;
          if (ignite && next[j] == CellState::kUnburned) {
            next[j] = CellState::kBurning;
            age[j] = 0;
          }
        }
        if (++age[k] >= params.burn_duration) next[k] = CellState::kBurned;
      }
    }
    cells.swap(next);
    if (std::none_of(cells.begin(), cells.end(),
                     [](CellState s) { return s == CellState::kBurning; })) {
      break;
    }
    sim.states.push_back({step, cells});
  }
  return sim;
}

FireSimulation simulate_fire(const geo::CountryModel& model,
                             std::span<const CellIndex> ignition,
                             const FireParams& params, int max_steps) {
  const RasterLayer& cover = model.layer("landcover");
  RasterLayer fuel(model.spec, "fuel", "1");
  for (std::size_t k = 0; k < fuel.values().size(); ++k) {
    const double v = cover.values()[k];
    fuel.mutable_values()[k] =
        v == model.spec.nodata ? 0.0 : hazard::fuel_for_landcover(static_cast<int>(v));
  }
  return simulate_fire(fuel, model.layer("elevation"), ignition, params, max_steps);
}

std::vector<int> ignition_steps(const FireSimulation& sim) {
  std::vector<int> first(sim.spec.cell_count(), -1);
  for (std::size_t s = 0; s < sim.states.size(); ++s) {
    const auto& cells = sim.states[s].cells;
    for (std::size_t k = 0; k < cells.size(); ++k) {
      if (first[k] < 0 &&
          (cells[k] == CellState::kBurning || cells[k] == CellState::kBurned)) {
        first[k] = static_cast<int>(s);
      }
    }
  }
  return first;
}

std::vector<std::size_t> burn_envelope(const FireSimulation& sim, double t_minutes) {
  if (!(t_minutes >= 0.0)) throw InvalidArgument("envelope time must be >= 0");
  if (t_minutes > sim.horizon_minutes()) {
    throw InvalidArgument("envelope time is past the simulated horizon");
  }
  const auto& cells = sim.states[step_at(sim, t_minutes)].cells;
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < cells.size(); ++k) {
    if (cells[k] == CellState::kBurning || cells[k] == CellState::kBurned) {
      out.push_back(k);
    }
  }
  return out;
}

RasterLayer state_raster(const FireSimulation& sim, std::size_t index) {
  if (index >= sim.states.size()) throw InvalidArgument("no such fire state");
  RasterLayer out(sim.spec, "fire_state", "code");
  const auto& cells = sim.states[index].cells;
  for (std::size_t k = 0; k < cells.size(); ++k) {
    out.mutable_values()[k] = static_cast<double>(cells[k]);
  }
  return out;
}

EscapeRoute escape_route(const proximity::RoadNetwork& net,
                         proximity::NodeId start, const FireSimulation& sim,
                         double walk_speed_ms) {
  if (!(walk_speed_ms > 0.0)) throw InvalidArgument("walk speed must be > 0");
  const std::size_t s = net.require_index(start);
  const auto first = ignition_steps(sim);
  const std::size_t n = net.node_count();

  // Recorded step at which each node's cell burns; -1 = never / off-grid.
  std::vector<int> node_step(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    if (const auto c = sim.spec.cell_of(net.node_at(i).pos)) {
      node_step[i] = first[sim.spec.flat(*c)];
    }
  }
  auto burning_at = [&](std::size_t node, double t) {
    return node_step[node] >= 0 && node_step[node] <= step_at(sim, t);
  };

  EscapeRoute out;
  if (burning_at(s, 0.0)) return out;

  const double meters_per_minute = walk_speed_ms * 60.0;
  std::vector<double> arrival(n, proximity::kUnreachable);
  std::vector<std::size_t> parent(n, n);
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  arrival[s] = 0.0;
  queue.push({0.0, s});
  std::vector<bool> done(n, false);
  std::size_t goal = n;
  while (!queue.empty()) {
    const auto [t, u] = queue.top();
    queue.pop();
    if (done[u]) continue;
    done[u] = true;
    if (node_step[u] < 0) {
      // Settled in (time, index) order; index order is id order.
      goal = u;
      break;
    }
    for (const auto& arc : net.arcs(u)) {
      const double ta = t + net.edges()[arc.edge].length / meters_per_minute;
      if (burning_at(u, ta) || burning_at(arc.to, ta)) continue;
      if (ta < arrival[arc.to] || (ta == arrival[arc.to] && u < parent[arc.to])) {
        arrival[arc.to] = ta;
        parent[arc.to] = u;
        queue.push({ta, arc.to});
      }
    }
  }
  if (goal == n) return out;
  out.feasible = true;
  out.minutes = arrival[goal];
  for (std::size_t v = goal; v != n; v = parent[v]) out.nodes.push_back(net.node_at(v).id);
  std::reverse(out.nodes.begin(), out.nodes.end());
  return out;
}

}  // namespace terratwin::firesim
