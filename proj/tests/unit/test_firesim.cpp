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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "terratwin/common/error.hpp"
#include "terratwin/common/rng.hpp"
#include "terratwin/firesim/firesim.hpp"
#include "terratwin/geomodel/country.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace terratwin;
using namespace terratwin::firesim;
using geo::CellIndex;
using geo::GridSpec;
using geo::RasterLayer;

namespace {

GridSpec square(int n, double cellsize = 100.0) {
  return GridSpec{n, n, 0.0, 0.0, cellsize, -9999.0};
}

std::vector<int> codes(const FireState& s) {
  std::vector<int> out;
  for (auto c : s.cells) out.push_back(static_cast<int>(c));
  return out;
}

// Quarter turn clockwise: (r, c) -> (c, n - 1 - r).
RasterLayer rotate(const RasterLayer& in) {
  const int n = in.spec().nrows;
  RasterLayer out(in.spec(), in.name(), in.units());
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) out.at(c, n - 1 - r) = in.at(r, c);
  }
  return out;
}

std::vector<int> rotate_cells(const FireState& s, int n) {
  std::vector<int> out(s.cells.size());
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      out[static_cast<std::size_t>(c) * n + (n - 1 - r)] =
          static_cast<int>(s.cells[static_cast<std::size_t>(r) * n + c]);
    }
  }
  return out;
}

std::vector<std::vector<int>> read_fixture(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::vector<std::vector<int>> states;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (line.rfind("step", 0) == 0) {
      states.emplace_back();
      continue;
    }
    for (char ch : line) states.back().push_back(ch - '0');
  }
  return states;
}

}  // namespace

TEST_CASE("hand-traced 5x5 barrier fixture") {
  const auto spec = square(5);
  RasterLayer fuel(spec, "fuel", "1", 1.0);
  for (int r = 0; r < 5; ++r) fuel.at(r, 2) = 0.0;
  const RasterLayer flat(spec, "elevation", "m", 0.0);
  FireParams p;
  const CellIndex ign[] = {{2, 0}};
  const auto sim = simulate_fire(fuel, flat, ign, p, 50);
  const auto want = read_fixture(std::string(TERRATWIN_SOURCE_DIR) + "/tests/fixtures/fire_5x5.txt");
  REQUIRE(sim.states.size() == want.size());
  for (std::size_t i = 0; i < want.size(); ++i) {
    CHECK(sim.states[i].step == static_cast<int>(i));
    CHECK_MESSAGE(codes(sim.states[i]) == want[i], "step ", i);
  }
}

TEST_CASE("zero fuel contains the fire") {
  const auto spec = square(9);
  RasterLayer fuel(spec, "fuel", "1", 0.0);
  fuel.at(4, 4) = 1.0;
  const RasterLayer flat(spec, "elevation", "m", 0.0);
  for (int duration : {1, 2, 5}) {
    FireParams p;
    p.burn_duration = duration;
    p.wind = {20.0, 45.0};
    const CellIndex ign[] = {{4, 4}};
    const auto sim = simulate_fire(fuel, flat, ign, p, 40);
    CHECK(static_cast<int>(sim.states.size()) == duration);
    for (const auto& s : sim.states) {
      for (std::size_t k = 0; k < s.cells.size(); ++k) {
        if (k == spec.flat({4, 4})) continue;
        CHECK(s.cells[k] == CellState::kNonflammable);
      }
    }
  }
  const CellIndex bad[] = {{0, 0}};
  CHECK_THROWS_AS(simulate_fire(fuel, flat, bad, FireParams{}, 10), InvalidArgument);
}

TEST_CASE("uniform fuel burns the Chebyshev ball") {
  const int n = 21;
  const auto spec = square(n);
  const RasterLayer fuel(spec, "fuel", "1", 0.9);
  const RasterLayer flat(spec, "elevation", "m", 0.0);
  FireParams p;
  p.burn_duration = 3;
  const CellIndex ign[] = {{7, 12}};
  const auto sim = simulate_fire(fuel, flat, ign, p, 30);
  for (const auto& s : sim.states) {
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < n; ++c) {
        const int cheb = std::max(std::abs(r - 7), std::abs(c - 12));
        const auto st = s.cells[spec.flat({r, c})];
        const bool lit = st == CellState::kBurning || st == CellState::kBurned;
        CHECK(lit == (cheb <= s.step));
      }
    }
  }
}

TEST_CASE("rotation equivariance on a deterministic run") {
  const int n = 33;
  const auto spec = square(n, 50.0);
  Rng rng(9);
  RasterLayer fuel(spec, "fuel", "1");
  RasterLayer elev(spec, "elevation", "m");
  for (auto& v : fuel.mutable_values()) v = rng.uniform() < 0.1 ? 0.0 : rng.uniform(0.5, 1.0);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) elev.at(r, c) = 3.0 * r + std::sin(c * 0.7) * 4.0 + rng.uniform(0, 2);
  }
  FireParams p;
  p.p0 = 0.55;
  p.wind = {6.0, 30.0};
  p.k_wind = 0.08;
  p.k_slope = 0.8;
  CellIndex ign{16, 10};
  fuel.at(ign) = 1.0;
  const CellIndex one[] = {ign};
  const auto a = simulate_fire(fuel, elev, one, p, 40);

  FireParams q = p;
  q.wind.direction_deg = p.wind.direction_deg + 90.0;
  const CellIndex turned[] = {{ign.col, n - 1 - ign.row}};
  const auto b = simulate_fire(rotate(fuel), rotate(elev), turned, q, 40);
  REQUIRE(a.states.size() == b.states.size());
  REQUIRE(a.states.size() > 5);
  for (std::size_t i = 0; i < a.states.size(); ++i) {
    CHECK(rotate_cells(a.states[i], n) == codes(b.states[i]));
  }
}

TEST_CASE("stochastic runs are reproducible per seed") {
  const auto spec = square(30);
  Rng rng(2);
  RasterLayer fuel(spec, "fuel", "1");
  for (auto& v : fuel.mutable_values()) v = rng.uniform(0.3, 1.0);
  const RasterLayer flat(spec, "elevation", "m", 0.0);
  FireParams p;
  p.mode = Mode::kStochastic;
  p.p0 = 0.5;
  p.seed = 1234;
  const CellIndex ign[] = {{15, 15}};
  const auto a = simulate_fire(fuel, flat, ign, p, 25);
  const auto b = simulate_fire(fuel, flat, ign, p, 25);
  REQUIRE(a.states.size() == b.states.size());
  for (std::size_t i = 0; i < a.states.size(); ++i) CHECK(a.states[i].cells == b.states[i].cells);
  p.seed = 99;
  const auto c = simulate_fire(fuel, flat, ign, p, 25);
  bool differs = c.states.size() != a.states.size();
  for (std::size_t i = 0; !differs && i < a.states.size(); ++i) {
    differs = a.states[i].cells != c.states[i].cells;
  }
  CHECK(differs);
}

TEST_CASE("states never revert and envelopes grow") {
  const auto model = geo::generate_country(4, geo::default_grid(48), {});
  FireParams p;
  p.mode = Mode::kStochastic;
  p.seed = 5;
  p.wind = {8.0, 200.0};
  // Find a flammable ignition cell near the middle.
  const auto sim0 = [&]() {
    for (int r = 20; r < 48; ++r) {
      for (int c = 20; c < 48; ++c) {
        const CellIndex ign[] = {{r, c}};
        try {
          return simulate_fire(model, ign, p, 30);
        } catch (const InvalidArgument&) {
        }
      }
    }
    FAIL("no flammable cell");
    return FireSimulation{};
  }();
  for (std::size_t i = 1; i < sim0.states.size(); ++i) {
    const auto& prev = sim0.states[i - 1].cells;
    const auto& cur = sim0.states[i].cells;
    for (std::size_t k = 0; k < cur.size(); ++k) {
      if (prev[k] == CellState::kBurned) CHECK(cur[k] == CellState::kBurned);
      if (prev[k] == CellState::kNonflammable) CHECK(cur[k] == CellState::kNonflammable);
      if (prev[k] == CellState::kBurning) CHECK(cur[k] != CellState::kUnburned);
    }
  }
  std::size_t last = 0;
  for (double t = 0.0; t <= sim0.horizon_minutes(); t += 7.0) {
    const auto env = burn_envelope(sim0, t);
    CHECK(env.size() >= last);
    last = env.size();
  }
  const auto start = burn_envelope(sim0, 0.0);
  CHECK(start.size() == 1);
  CHECK_THROWS_AS(burn_envelope(sim0, sim0.horizon_minutes() + 1.0), InvalidArgument);
  CHECK_THROWS_AS(burn_envelope(sim0, -1.0), InvalidArgument);
  const auto raster = state_raster(sim0, sim0.states.size() - 1);
  for (double v : raster.values()) CHECK((v >= 0.0 && v <= 3.0));
}

TEST_CASE("spread probability factors") {
  FireParams p;
  p.wind = {0.0, 0.0};
  CHECK(spread_probability(p, 1.0, -1, 0, 0.0, 100.0) == doctest::Approx(0.6));
  CHECK(spread_probability(p, 0.5, 1, 1, 0.0, 100.0) == doctest::Approx(0.3));
  p.wind = {10.0, 90.0};
  const double downwind = spread_probability(p, 0.5, 0, 1, 0.0, 100.0);
  const double upwind = spread_probability(p, 0.5, 0, -1, 0.0, 100.0);
  CHECK(downwind == doctest::Approx(0.3 * std::exp(1.0)));
  CHECK(upwind == doctest::Approx(0.3 * std::exp(-1.0)));
  p.wind = {0.0, 0.0};
  CHECK(spread_probability(p, 0.5, 1, 0, 10.0, 100.0) == doctest::Approx(0.3 * std::exp(0.1)));
  CHECK(spread_probability(p, 1.0, 1, 0, 500.0, 100.0) == 1.0);
  FireParams bad;
  bad.burn_duration = 0;
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
}

TEST_CASE("escape route examples") {
  // Ignition in the bottom-left corner; cell (r, c) burns at step max(9 - r, c).
  // Column 9 and the top two cells of column 8 do not burn.
  const auto spec = square(10);
  RasterLayer fuel(spec, "fuel", "1", 1.0);
  for (int r = 0; r < 10; ++r) fuel.at(r, 9) = 0.0;
  fuel.at(0, 8) = 0.0;
  fuel.at(1, 8) = 0.0;
  const RasterLayer flat(spec, "elevation", "m", 0.0);
  const CellIndex ign[] = {{9, 0}};
  const auto sim = simulate_fire(fuel, flat, ign, FireParams{}, 12);
  auto at = [&](int r, int c) { return spec.center({r, c}); };
  using proximity::RoadClass;
  const proximity::RoadNetwork net(
      {{1, at(0, 2)}, {2, at(9, 3)}, {3, at(9, 9)}, {4, at(0, 8)}, {5, at(8, 1)}, {6, at(9, 0)}},
      {{1, 2, RoadClass::kDirt, 950.0},
       {2, 3, RoadClass::kDirt, 600.0},
       {1, 4, RoadClass::kDirt, 1800.0},
       {5, 3, RoadClass::kDirt, 1200.0}});
  // 0.5 m/s: the short way reaches node 2 at 31.7 min, after its cell
  // ignites at 30 min, so the longer way to node 4 wins.
  const auto r = escape_route(net, 1, sim, 0.5);
  CHECK(r.feasible);
  CHECK(r.nodes == std::vector<proximity::NodeId>{1, 4});
  CHECK(r.minutes == doctest::Approx(60.0));
  // Faster walkers beat the fire along the short way.
  const auto fast = escape_route(net, 1, sim, 1.0);
  CHECK(fast.nodes == std::vector<proximity::NodeId>{1, 2, 3});
  // Node 5 burns at 10 min and its only road takes 40 min.
  CHECK_FALSE(escape_route(net, 5, sim, 0.5).feasible);
  // Starting inside the fire.
  CHECK_FALSE(escape_route(net, 6, sim, 0.5).feasible);
  // Starting somewhere that never burns.
  const auto stay = escape_route(net, 4, sim, 0.5);
  CHECK(stay.feasible);
  CHECK(stay.nodes == std::vector<proximity::NodeId>{4});
  CHECK(stay.minutes == 0.0);

  const auto oracle_r = oracle::escape_by_paths(net, 1, sim, 0.5);
  CHECK(oracle_r.feasible);
  CHECK(oracle_r.minutes == doctest::Approx(60.0));
}

TEST_CASE("escape route matches path enumeration on small graphs") {
  Rng rng(61);
  const auto spec = square(12, 500.0);
  int feasible = 0, infeasible = 0;
  for (int trial = 0; trial < 60; ++trial) {
    RasterLayer fuel(spec, "fuel", "1");
    for (auto& v : fuel.mutable_values()) v = rng.uniform() < 0.15 ? 0.0 : rng.uniform(0.4, 1.0);
    RasterLayer elev(spec, "elevation", "m");
    for (auto& v : elev.mutable_values()) v = rng.uniform(0.0, 40.0);
    FireParams p;
    p.mode = Mode::kStochastic;
    p.seed = rng.next_u64();
    p.p0 = rng.uniform(0.5, 0.9);
    p.wind = {rng.uniform(0.0, 10.0), rng.uniform(0.0, 360.0)};
    CellIndex ign{static_cast<int>(rng.below(12)), static_cast<int>(rng.below(12))};
    fuel.at(ign) = 1.0;
    const CellIndex one[] = {ign};
    const auto sim = simulate_fire(fuel, elev, one, p, 15);
    const int nodes = 2 + static_cast<int>(rng.below(9));
    const auto net = fixture::random_network(rng, nodes, static_cast<int>(rng.below(8)),
                                             rng.uniform() < 0.8, 6000.0);
    const double walk = rng.uniform(0.3, 3.0);
    for (int s = 0; s < nodes; ++s) {
      const auto start = net.node_at(s).id;
      const auto got = escape_route(net, start, sim, walk);
      const auto want = oracle::escape_by_paths(net, start, sim, walk);
      CHECK(got.feasible == want.feasible);
      if (got.feasible && want.feasible) {
        CHECK(std::abs(got.minutes - want.minutes) <= 1e-9 * std::max(1.0, want.minutes));
        CHECK(got.nodes.front() == start);
        ++feasible;
      } else {
        ++infeasible;
      }
    }
  }
  CHECK(feasible > 20);
  CHECK(infeasible > 20);
}
