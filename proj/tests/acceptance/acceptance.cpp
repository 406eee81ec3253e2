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

// Acceptance gate. Prints one PASS/FAIL line per criterion and exits nonzero
// if any criterion fails.

#include <httplib.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "terratwin/common/checksum.hpp"
#include "terratwin/common/error.hpp"
#include "terratwin/common/rng.hpp"
#include "terratwin/engine/twin.hpp"
#include "terratwin/engine/validation.hpp"
#include "terratwin/firesim/firesim.hpp"
#include "terratwin/geomodel/country.hpp"
#include "terratwin/geomodel/raster_io.hpp"
#include "terratwin/hazard/factors.hpp"
#include "terratwin/hazard/hazard.hpp"
#include "terratwin/landcover/landcover.hpp"
#include "terratwin/pipeline/catalog.hpp"
#include "terratwin/proximity/distance.hpp"
#include "terratwin/proximity/routing.hpp"
#include "terratwin/scenario/placement.hpp"
#include "terratwin/server/http.hpp"
#include "terratwin/server/router.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace terratwin;
using nlohmann::json;
using proximity::NodeId;
using Clock = std::chrono::steady_clock;

namespace {

// Collects failures for one criterion; the first few are kept for the report.
struct Check {
  int failures = 0;
  std::string first;
  void expect(bool ok, const std::string& what) {
    if (ok) return;
    if (failures++ == 0) first = what;
  }
  bool ok() const { return failures == 0; }
};

int g_failed = 0;

void report(const std::string& name, bool pass, const std::string& detail) {
  std::printf("%s %s: %s\n", pass ? "PASS" : "FAIL", name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failed;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

std::string summary(const Check& c, const std::string& ok_text) {
  return c.ok() ? ok_text : fmt("%d failures, first: %s", c.failures, c.first.c_str());
}

const geo::CountryModel& big_model() {
  static const geo::CountryModel m = geo::generate_country(1, geo::default_grid(256));
  return m;
}

// ---------------------------------------------------------------------------

void routing_oracle() {
  Rng rng(2001);
  Check chk;
  double worst = 0.0;
  const auto t0 = Clock::now();
  for (int g = 0; g < 200; ++g) {
    const int n = 2 + static_cast<int>(rng.below(49));
    const auto net = fixture::random_network(rng, n, static_cast<int>(rng.below(n + 1)), true);
    const auto all = oracle::floyd_warshall(net);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const double got = proximity::travel_time(net, net.node_at(i).id, net.node_at(j).id);
        const double want = all[i][j];
        const double rel = std::abs(got - want) / std::max(1e-300, std::abs(want));
        if (want != 0.0) worst = std::max(worst, rel);
        chk.expect(std::isfinite(want) && (got == want || rel <= 1e-9),
                   fmt("graph %d pair (%d,%d): %.17g vs %.17g", g, i, j, got, want));
      }
    }
  }
  const double secs = seconds_since(t0);
  chk.expect(secs < 5.0, fmt("took %.2f s", secs));
  report("routing_matches_all_pairs", chk.ok(),
         summary(chk, fmt("200 graphs, max relative error %.3g, %.2f s", worst, secs)));
}

geo::Geometry random_geometry(Rng& rng, const geo::GridSpec& s) {
  const geo::Point a{rng.uniform(s.xll - 200.0, s.xmax() + 200.0),
                     rng.uniform(s.yll - 200.0, s.ymax() + 200.0)};
  switch (rng.below(3)) {
    case 0:
      return a;
    case 1: {
      geo::LineString line{{a}};
      const int n = 1 + static_cast<int>(rng.below(4));
      for (int i = 0; i < n; ++i) {
        line.points.push_back({line.points.back().x + rng.uniform(-600.0, 600.0),
                               line.points.back().y + rng.uniform(-600.0, 600.0)});
      }
      return line;
    }
    default: {
      const double w = rng.uniform(30.0, 500.0);
      const double h = rng.uniform(30.0, 500.0);
      return geo::Polygon{{{a, {a.x + w, a.y}, {a.x + w, a.y + h}, {a.x, a.y + h}, a}}};
    }
  }
}

void distance_oracle() {
  Rng rng(2002);
  const geo::GridSpec spec{64, 64, 1000.0, 2000.0, 50.0, -9999.0};
  std::vector<geo::Geometry> geoms;
  for (int i = 0; i < 20; ++i) geoms.push_back(random_geometry(rng, spec));
  const auto t0 = Clock::now();
  const auto layer = proximity::distance_layer(spec, geoms, "d");
  const double secs = seconds_since(t0);
  const auto want = oracle::distance_grid(spec, geoms);
  Check chk;
  for (std::size_t k = 0; k < want.size(); ++k) {
    chk.expect(layer.values()[k] == want[k],
               fmt("cell %zu: %.17g vs %.17g", k, layer.values()[k], want[k]));
  }
  chk.expect(secs < 2.0, fmt("took %.2f s", secs));
  report("distance_layer_matches_brute_force", chk.ok(),
         summary(chk, fmt("4096 cells exact, %.3f s", secs)));
}

struct Instance {
  proximity::RoadNetwork net;
  scenario::PlacementProblem problem;
  std::vector<std::vector<double>> times;  // [candidate][demand]
  std::vector<double> weights;
};

Instance random_instance(Rng& rng, int nodes, int candidates, int demands, int k) {
  Instance in{fixture::random_network(rng, nodes, nodes / 2, true), {}, {}, {}};
  const auto all = oracle::floyd_warshall(in.net);
  std::vector<int> order(nodes);
  for (int i = 0; i < nodes; ++i) order[i] = i;
  for (int i = nodes - 1; i > 0; --i) std::swap(order[i], order[rng.below(i + 1)]);
  std::vector<int> cand(order.begin(), order.begin() + candidates);
  std::sort(cand.begin(), cand.end(),
            [&](int a, int b) { return in.net.node_at(a).id < in.net.node_at(b).id; });
  for (int c : cand) in.problem.candidates.push_back(in.net.node_at(c).id);
  std::vector<int> dem;
  for (int d = 0; d < demands; ++d) dem.push_back(static_cast<int>(rng.below(nodes)));
  std::sort(dem.begin(), dem.end());
  dem.erase(std::unique(dem.begin(), dem.end()), dem.end());
  for (int d : dem) {
    const double w = std::round(rng.uniform(1.0, 500.0));
    in.problem.demand.push_back({in.net.node_at(d).id, w});
    in.weights.push_back(w);
  }
  for (int c : cand) {
    std::vector<double> row;
    for (int d : dem) row.push_back(all[c][d]);
    in.times.push_back(row);
  }
  in.problem.k = k;
  return in;
}

std::vector<std::size_t> positions(const scenario::PlacementProblem& p,
                                   const std::vector<NodeId>& chosen) {
  std::vector<std::size_t> out;
  for (NodeId id : chosen) {
    out.push_back(static_cast<std::size_t>(
        std::find(p.candidates.begin(), p.candidates.end(), id) - p.candidates.begin()));
  }
  return out;
}

void placement_optimality() {
  Rng rng(2003);
  Check km;
  Check cover;
  double worst_gap = 0.0;
  int cover_checked = 0;
  const auto t0 = Clock::now();
  for (int trial = 0; trial < 100; ++trial) {
    const int ncand = 1 + static_cast<int>(rng.below(12));
    const int k = 1 + static_cast<int>(rng.below(std::min(3, ncand)));
    auto in = random_instance(rng, 20 + static_cast<int>(rng.below(21)), ncand, 15, k);
    in.problem.net = &in.net;
    const auto heur = scenario::solve_kmedian(in.problem);
    const auto greedy = scenario::solve_kmedian_greedy(in.problem);
    const auto opt = oracle::kmedian_optimum(in.times, in.weights, k);
    km.expect(heur.objective <= greedy.objective,
              fmt("instance %d: %.6f above greedy %.6f", trial, heur.objective, greedy.objective));
    km.expect(heur.objective <= 1.2 * opt.objective + 1e-9,
              fmt("instance %d: %.6f vs optimum %.6f", trial, heur.objective, opt.objective));
    worst_gap = std::max(worst_gap, heur.objective / opt.objective - 1.0);
    const auto chosen = positions(in.problem, heur.chosen);
    const double value = oracle::kmedian_value(in.times, in.weights, chosen);
    km.expect(std::abs(value - heur.objective) <= 1e-9 * std::max(1.0, value),
              fmt("instance %d: reported objective %.9f, recomputed %.9f", trial, heur.objective, value));
    for (std::size_t i = 0; i < chosen.size(); ++i) {
      for (std::size_t u = 0; u < in.problem.candidates.size(); ++u) {
        if (std::find(chosen.begin(), chosen.end(), u) != chosen.end()) continue;
        auto swapped = chosen;
        swapped[i] = u;
        km.expect(oracle::kmedian_value(in.times, in.weights, swapped) >= value * (1.0 - 1e-9),
                  fmt("instance %d: improving swap %zu -> %zu", trial, chosen[i], u));
      }
    }

    // Cover on up to 15 candidates.
    const int cc = 1 + static_cast<int>(rng.below(15));
    auto cv = random_instance(rng, 35, cc, 14, 1);
    cv.problem.net = &cv.net;
    cv.problem.t_cover = rng.uniform(2.0, 8.0);
    std::vector<NodeId> targets;
    for (const auto& d : cv.problem.demand) targets.push_back(d.node);
    std::vector<std::vector<bool>> covers;
    bool borderline = false;
    for (const auto& row : cv.times) {
      std::vector<bool> c;
      for (double t : row) {
        borderline = borderline || std::abs(t - cv.problem.t_cover) < 1e-9;
        c.push_back(t <= cv.problem.t_cover);
      }
      covers.push_back(c);
    }
    if (borderline) continue;
    ++cover_checked;
    const auto r = scenario::solve_cover(cv.problem, targets);
    const auto sites = positions(cv.problem, r.chosen);
    for (std::size_t t = 0; t < targets.size(); ++t) {
      bool any = false, hit = false;
      for (std::size_t c = 0; c < covers.size(); ++c) {
        any = any || covers[c][t];
        if (std::find(sites.begin(), sites.end(), c) != sites.end()) hit = hit || covers[c][t];
      }
      cover.expect(hit == any, fmt("instance %d: coverable target %lld not covered", trial,
                                   static_cast<long long>(targets[t])));
    }
    for (std::size_t drop = 0; drop < sites.size(); ++drop) {
      bool lost = false;
      for (std::size_t t = 0; t < targets.size() && !lost; ++t) {
        bool other = false;
        for (std::size_t i = 0; i < sites.size(); ++i) {
          if (i != drop) other = other || covers[sites[i]][t];
        }
        lost = covers[sites[drop]][t] && !other;
      }
      cover.expect(lost, fmt("instance %d: site %zu is redundant", trial, sites[drop]));
    }
    const std::size_t best = oracle::cover_optimum(covers);
    cover.expect(static_cast<double>(sites.size()) <=
                     oracle::harmonic(targets.size()) * static_cast<double>(best) + 1e-12,
                 fmt("instance %d: %zu stations vs optimum %zu", trial, sites.size(), best));
  }
  const double secs = seconds_since(t0);
  km.expect(secs < 60.0, fmt("took %.2f s", secs));
  cover.expect(cover_checked >= 80, fmt("only %d cover instances checked", cover_checked));
  report("kmedian_swap_optimal_within_20pct", km.ok(),
         summary(km, fmt("100 instances, worst gap to optimum %.2f%%, %.2f s", 100.0 * worst_gap, secs)));
  report("cover_complete_irredundant_bounded", cover.ok(),
         summary(cover, fmt("%d instances", cover_checked)));
}

void hazard_classes() {
  Check chk;
  for (int i = 0; i <= 100; ++i) {
    chk.expect(hazard::classify_value(i / 100.0) == oracle::class_for_percent(i),
               fmt("risk %.2f", i / 100.0));
  }
  Rng rng(2004);
  const geo::GridSpec spec{40, 40, 0.0, 0.0, 100.0, -9999.0};
  std::vector<double> sv(spec.cell_count()), dv(spec.cell_count());
  for (auto& v : sv) v = rng.uniform() < 0.05 ? spec.nodata : rng.uniform();
  for (auto& v : dv) v = rng.uniform();
  const geo::RasterLayer s(spec, sv, "s");
  const geo::RasterLayer d(spec, dv, "d");
  std::size_t compared = 0;
  for (geo::Peril peril : geo::kAllPerils) {
    const auto base = hazard::classify(
        hazard::risk_score(s, d, 0.5, hazard::ClimateScenario::baseline(), peril));
    for (double m : {1.0, 1.001, 1.05, 1.2, 1.5, 2.0, 4.0}) {
      const hazard::ClimateScenario sc("m", {{peril, m}});
      const auto c = hazard::classify(hazard::risk_score(s, d, 0.5, sc, peril));
      for (std::size_t k = 0; k < spec.cell_count(); ++k) {
        if (base.is_nodata(base.values()[k])) continue;
        ++compared;
        chk.expect(c.values()[k] >= base.values()[k], fmt("multiplier %.3f lowered cell %zu", m, k));
      }
    }
  }
  for (const auto& sc : engine::builtin_scenarios()) {
    for (geo::Peril peril : geo::kAllPerils) chk.expect(sc.multiplier(peril) >= 1.0, sc.name());
  }
  report("hazard_classes_and_scenario_monotonicity", chk.ok(),
         summary(chk, fmt("101-step sweep exact, %zu cell comparisons", compared)));
}

void recall_regression() {
  const auto t0 = Clock::now();
  const auto& m = big_model();
  const geo::Date split = std::chrono::year{2022} / 1 / 1;
  std::vector<geo::HazardEvent> train, held;
  for (const auto& e : m.events) (e.date < split ? train : held).push_back(e);
  const auto factors = hazard::build_factor_layers(m);
  const auto s = hazard::susceptibility(factors, hazard::default_weights(geo::Peril::kLandslide));
  const auto d = hazard::incident_density(train, geo::Peril::kLandslide, m.spec, engine::kDensityRadiusM);
  const auto r = hazard::risk_score(s, d, engine::kIncidentWeight,
                                    hazard::ClimateScenario::baseline(), geo::Peril::kLandslide);
  const auto classes = hazard::classify(r);
  const double recall = hazard::validate_recall(classes, held, geo::Peril::kLandslide, 3);
  std::size_t held_ls = 0;
  for (const auto& e : held) held_ls += e.peril == geo::Peril::kLandslide;
  const double secs = seconds_since(t0);
  // Recorded at the first verified run: 86 of 92 held-out landslides hit.
  const bool pinned = held_ls == 92 && recall == 86.0 / 92.0;
  const bool pass = recall >= 0.85 && pinned && secs < 30.0;
  report("landslide_recall_regression", pass,
         fmt("seed 1, 256x256, %zu held-out landslides, recall %.4f (>= 0.85, recorded 86/92%s), "
             "%.2f s",
             held_ls, recall, pinned ? "" : " MISMATCH", secs));
}

// ---------------------------------------------------------------------------

geo::GridSpec square(int n, double cellsize = 100.0) {
  return geo::GridSpec{n, n, 0.0, 0.0, cellsize, -9999.0};
}

std::vector<int> codes(const firesim::FireState& s) {
  std::vector<int> out;
  for (auto c : s.cells) out.push_back(static_cast<int>(c));
  return out;
}

geo::RasterLayer rotate(const geo::RasterLayer& in) {
  const int n = in.spec().nrows;
  geo::RasterLayer out(in.spec(), in.name(), in.units());
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) out.at(c, n - 1 - r) = in.at(r, c);
  }
  return out;
}

std::vector<int> rotate_cells(const firesim::FireState& s, int n) {
  std::vector<int> out(s.cells.size());
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      out[static_cast<std::size_t>(c) * n + (n - 1 - r)] =
          static_cast<int>(s.cells[static_cast<std::size_t>(r) * n + c]);
    }
  }
  return out;
}

void fire_zero_fuel() {
  Check chk;
  const auto spec = square(9);
  geo::RasterLayer fuel(spec, "fuel", "1", 0.0);
  fuel.at(4, 4) = 1.0;
  const geo::RasterLayer flat(spec, "elevation", "m", 0.0);
  for (int duration : {1, 2, 5}) {
    firesim::FireParams p;
    p.burn_duration = duration;
    p.wind = {20.0, 45.0};
    const geo::CellIndex ign[] = {{4, 4}};
    const auto sim = firesim::simulate_fire(fuel, flat, ign, p, 40);
    chk.expect(static_cast<int>(sim.states.size()) == duration,
               fmt("duration %d gave %zu states", duration, sim.states.size()));
    for (const auto& s : sim.states) {
      for (std::size_t k = 0; k < s.cells.size(); ++k) {
        if (k == spec.flat({4, 4})) continue;
        chk.expect(s.cells[k] == firesim::CellState::kNonflammable,
                   fmt("cell %zu changed at step %d", k, s.step));
      }
    }
  }
  report("fire_zero_fuel_containment", chk.ok(), summary(chk, "ignition cell only, durations 1, 2, 5"));
}

void fire_rotation() {
  const int n = 33;
  const auto spec = square(n, 50.0);
  Rng rng(2005);
  geo::RasterLayer fuel(spec, "fuel", "1");
  geo::RasterLayer elev(spec, "elevation", "m");
  for (auto& v : fuel.mutable_values()) v = rng.uniform() < 0.1 ? 0.0 : rng.uniform(0.5, 1.0);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) elev.at(r, c) = 3.0 * r + std::sin(c * 0.7) * 4.0 + rng.uniform(0, 2);
  }
  firesim::FireParams p;
  p.p0 = 0.55;
  p.wind = {6.0, 30.0};
  p.k_wind = 0.08;
  p.k_slope = 0.8;
  const geo::CellIndex ign{16, 10};
  fuel.at(ign) = 1.0;
  const geo::CellIndex one[] = {ign};
  const auto a = firesim::simulate_fire(fuel, elev, one, p, 40);
  firesim::FireParams q = p;
  q.wind.direction_deg = p.wind.direction_deg + 90.0;
  const geo::CellIndex turned[] = {{ign.col, n - 1 - ign.row}};
  const auto b = firesim::simulate_fire(rotate(fuel), rotate(elev), turned, q, 40);
  Check chk;
  chk.expect(a.states.size() == b.states.size(),
             fmt("%zu vs %zu states", a.states.size(), b.states.size()));
  chk.expect(a.states.size() > 5, "fire died out immediately");
  for (std::size_t i = 0; i < std::min(a.states.size(), b.states.size()); ++i) {
    chk.expect(rotate_cells(a.states[i], n) == codes(b.states[i]), fmt("step %zu differs", i));
  }
  report("fire_rotation_equivariance", chk.ok(),
         summary(chk, fmt("33x33, %zu states identical after rotation", a.states.size())));
}

void fire_fixture(const std::string& source_dir) {
  Check chk;
  std::ifstream in(source_dir + "/tests/fixtures/fire_5x5.txt");
  std::vector<std::vector<int>> want;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (line.rfind("step", 0) == 0) {
      want.emplace_back();
      continue;
    }
    if (!want.empty()) {
      for (char ch : line) want.back().push_back(ch - '0');
    }
  }
  chk.expect(!want.empty(), "fixture missing");
  const auto spec = square(5);
  geo::RasterLayer fuel(spec, "fuel", "1", 1.0);
  for (int r = 0; r < 5; ++r) fuel.at(r, 2) = 0.0;
  const geo::RasterLayer flat(spec, "elevation", "m", 0.0);
  const geo::CellIndex ign[] = {{2, 0}};
  const auto sim = firesim::simulate_fire(fuel, flat, ign, firesim::FireParams{}, 50);
  chk.expect(sim.states.size() == want.size(),
             fmt("%zu states, fixture has %zu", sim.states.size(), want.size()));
  for (std::size_t i = 0; i < std::min(want.size(), sim.states.size()); ++i) {
    chk.expect(codes(sim.states[i]) == want[i], fmt("step %zu differs", i));
  }
  report("fire_hand_traced_fixture", chk.ok(), summary(chk, fmt("%zu states equal", want.size())));
}

void fire_escape() {
  Rng rng(2006);
  const auto spec = square(12, 500.0);
  Check chk;
  int feasible = 0, infeasible = 0;
  for (int trial = 0; trial < 100; ++trial) {
    geo::RasterLayer fuel(spec, "fuel", "1");
    for (auto& v : fuel.mutable_values()) v = rng.uniform() < 0.15 ? 0.0 : rng.uniform(0.4, 1.0);
    geo::RasterLayer elev(spec, "elevation", "m");
    for (auto& v : elev.mutable_values()) v = rng.uniform(0.0, 40.0);
    firesim::FireParams p;
    p.mode = trial % 2 ? firesim::Mode::kStochastic : firesim::Mode::kDeterministic;
    p.seed = rng.next_u64();
    p.p0 = rng.uniform(0.5, 0.9);
    p.wind = {rng.uniform(0.0, 10.0), rng.uniform(0.0, 360.0)};
    const geo::CellIndex ign{static_cast<int>(rng.below(12)), static_cast<int>(rng.below(12))};
    fuel.at(ign) = 1.0;
    const geo::CellIndex one[] = {ign};
    const auto sim = firesim::simulate_fire(fuel, elev, one, p, 15);
    const int nodes = 2 + static_cast<int>(rng.below(9));
    const auto net = fixture::random_network(rng, nodes, static_cast<int>(rng.below(8)),
                                             rng.uniform() < 0.8, 6000.0);
    const double walk = rng.uniform(0.3, 3.0);
    for (int s = 0; s < nodes; ++s) {
      const auto start = net.node_at(s).id;
      const auto got = firesim::escape_route(net, start, sim, walk);
      const auto want = oracle::escape_by_paths(net, start, sim, walk);
      chk.expect(got.feasible == want.feasible, fmt("trial %d start %d: feasibility", trial, s));
      if (got.feasible && want.feasible) {
        chk.expect(std::abs(got.minutes - want.minutes) <= 1e-9 * std::max(1.0, want.minutes),
                   fmt("trial %d start %d: %.6f vs %.6f min", trial, s, got.minutes, want.minutes));
        ++feasible;
      } else {
        ++infeasible;
      }
    }
  }
  report("fire_escape_matches_brute_force", chk.ok(),
         summary(chk, fmt("100 graphs of 2-10 nodes, %d feasible and %d infeasible starts", feasible,
                          infeasible)));
}

void spread_velocity() {
  const geo::GridSpec g{20, 10, 0.0, 0.0, 100.0, -9999.0};
  geo::RasterLayer a(g, "species", "code");
  geo::RasterLayer b(g, "species", "code");
  for (int r = 0; r < g.nrows; ++r) {
    a.at(r, 4) = 2;
    b.at(r, 7) = 2;
  }
  const double v = landcover::spread_velocity(a, b, 2, 10.0);
  report("spread_velocity_constructed_front", v == 30.0, fmt("%.17g m/yr (expected 30)", v));
}

// ---------------------------------------------------------------------------

void pipeline_checks() {
  fixture::TempDir dir("acceptance-pipeline");
  geo::GeneratorParams gp;
  gp.trees = 300;
  gp.events_per_peril = 60;
  const auto model = geo::generate_country(3, geo::default_grid(64), gp);
  pipeline::create_model_dir(dir.path(), model);
  const int year = model.params.data_year;

  Check stale;
  const auto cat = pipeline::ModelStore(dir.path()).load_current();
  stale.expect(pipeline::staleness_report(cat, year).empty(), "fresh catalog reported stale");
  const auto old = pipeline::staleness_report(cat, year + 1);
  stale.expect(old.categories() == std::vector<pipeline::Category>(pipeline::kAllCategories.begin(),
                                                                   pipeline::kAllCategories.end()),
               fmt("%zu categories flagged", old.categories().size()));
  std::size_t flagged = 0;
  for (const auto& [c, names] : old.stale) flagged += names.size();
  stale.expect(flagged == cat.entries.size(), fmt("%zu of %zu entries flagged", flagged, cat.entries.size()));
  report("staleness_flags_all_categories", stale.ok(),
         summary(stale, fmt("%zu entries over 5 categories flagged one year on", flagged)));

  Check idem;
  auto lc = model.layer("landcover");
  for (std::size_t k = 0; k < lc.values().size(); k += 97) {
    auto& v = lc.mutable_values()[k];
    v = v == geo::landcover_code::kBuilt ? geo::landcover_code::kShrub : geo::landcover_code::kBuilt;
  }
  geo::write_raster(lc, dir / "landcover.asc");
  const std::filesystem::path files[] = {dir / "landcover.asc"};
  const auto first = pipeline::apply_update(dir.path(), pipeline::Category::kLandCover, files, year + 1);
  idem.expect(first.new_version, "first update made no version");
  const auto second = pipeline::apply_update(dir.path(), pipeline::Category::kLandCover, files, year + 1);
  idem.expect(!second.new_version, "second update made a version");
  for (const auto& d : second.diffs) idem.expect(d.zero(), "non-zero diff on " + d.layer);
  idem.expect(pipeline::ModelStore(dir.path()).current_version() == first.catalog.version,
              "CURRENT moved");
  report("update_is_idempotent", idem.ok(),
         summary(idem, fmt("%s then zero diff", first.catalog.version.c_str())));

  // Readers load full models while a writer publishes versions that each
  // change one known cell; every read must match the version it names.
  Check conc;
  std::map<std::string, std::string> expected;  // version -> landcover checksum
  std::mutex mu;
  {
    const auto cur = pipeline::load_model(dir.path());
    expected[cur.catalog.version] = sha256_hex(geo::format_raster(cur.model.layer("landcover")));
  }
  std::atomic<bool> done{false};
  std::atomic<int> reads{0};
  std::atomic<int> bad{0};
  std::string bad_text;
  std::set<std::string> seen;
  auto reader = [&] {
    while (!done.load()) {
      try {
        const auto got = pipeline::load_model(dir.path());
        const auto sum = sha256_hex(geo::format_raster(got.model.layer("landcover")));
        std::lock_guard<std::mutex> lock(mu);
        seen.insert(got.catalog.version);
        const auto it = expected.find(got.catalog.version);
        if (it == expected.end() || it->second != sum || !got.report.clean()) {
          if (bad++ == 0) bad_text = "inconsistent read of " + got.catalog.version;
        }
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(mu);
        if (bad++ == 0) bad_text = e.what();
      }
      ++reads;
    }
  };
  std::vector<std::thread> readers;
  for (int i = 0; i < 3; ++i) readers.emplace_back(reader);
  for (int v = 0; v < 12; ++v) {
    lc.mutable_values()[1000 + v * 131] = geo::landcover_code::kWater;
    const auto text = geo::format_raster(lc);
    {
      // Register before publishing so a reader never sees an unknown version.
      std::lock_guard<std::mutex> lock(mu);
      const int next = std::stoi(pipeline::ModelStore(dir.path()).current_version().substr(1)) + 1;
      expected[fmt("v%04d", next)] = sha256_hex(text);
    }
    write_file_atomic(dir / "landcover.asc", text);
    pipeline::apply_update(dir.path(), pipeline::Category::kLandCover, files, year + 1);
    std::this_thread::sleep_for(std::chrono::milliseconds(20));
  }
  done = true;
  for (auto& t : readers) t.join();
  conc.expect(bad.load() == 0, bad_text);
  conc.expect(seen.size() >= 2, fmt("readers saw only %zu versions", seen.size()));
  report("concurrent_readers_see_one_version", conc.ok(),
         summary(conc, fmt("%d reads across %zu versions, all consistent", reads.load(), seen.size())));
}

void representative_validation() {
  const auto t0 = Clock::now();
  const engine::Twin twin(big_model(), pipeline::LayerCatalog{});
  const auto r = engine::validate_representatives(twin, 8, 0);
  const double secs = seconds_since(t0);
  const bool pass = r.k == 8 && r.reduction() >= 10.0 && r.suite.all_passed() && r.suite.executed > 0;
  report("representative_validation", pass,
         fmt("k=8, %zu executed vs %zu full-grid (%.0fx), %zu failed, %.2f s", r.suite.executed,
             r.full_grid_executions, r.reduction(), r.suite.failures.size(), secs));
}

void api_equivalence() {
  const auto twin = std::make_shared<const engine::Twin>(big_model(), [] {
    pipeline::LayerCatalog c;
    c.version = "v0001";
    return c;
  }());
  server::Router router(twin);
  server::ServeOptions opts;
  opts.refresh_seconds = 0;
  server::HttpServer http(router, opts);
  const int port = http.bind_any_port();
  if (port <= 0) {
    report("api_matches_library", false, "could not bind a port");
    return;
  }
  std::thread serve([&] { http.run(); });
  httplib::Client cli("127.0.0.1", port);

  Check chk;
  Rng rng(2007);
  const auto& s = twin->spec();
  const auto kinds = engine::proximity_kinds();
  const char* roles[] = {"bank_insurance", "real_estate", "property_owner",
                         "municipality", "farmer", "forestry", "tourist"};
  int answered = 0;
  for (int i = 0; i < 50; ++i) {
    const geo::Point p{rng.uniform(s.xll, s.xmax()), rng.uniform(s.yll, s.ymax())};
    const std::string xy = fmt("x=%.17g&y=%.17g", p.x, p.y);
    const geo::Peril peril = geo::kAllPerils[i % std::size(geo::kAllPerils)];
    const auto& sc = engine::builtin_scenarios()[i % engine::builtin_scenarios().size()];
    httplib::Headers h{{"X-Role", roles[i % 7]}};
    const auto res = cli.Get(("/api/v1/risk/" + std::string(geo::peril_name(peril)) + "?" + xy +
                              "&scenario=" + sc.name()).c_str(), h);
    if (!res) {
      chk.expect(false, "no HTTP response");
      break;
    }
    try {
      const auto want = twin->risk_at(peril, p, sc);
      const auto j = json::parse(res->body);
      chk.expect(res->status == 200 && j["score"].get<double>() == want.score &&
                     j["class"].get<int>() == want.hazard_class,
                 fmt("risk at point %d", i));
      ++answered;
    } catch (const DomainError&) {
      chk.expect(res->status == 422, fmt("nodata point %d gave %d", i, res->status));
    }
    const std::string kind = kinds[i % kinds.size()];
    const auto pr = cli.Get(("/api/v1/proximity/" + kind + "?" + xy).c_str(), h);
    if (!pr) {
      chk.expect(false, "no HTTP response");
      break;
    }
    try {
      const auto want = twin->proximity_at(kind, p);
      const auto j = json::parse(pr->body);
      chk.expect(pr->status == 200 && j["distance_m"].get<double>() == want.distance_m &&
                     j["id"].get<std::int64_t>() == want.id,
                 fmt("proximity %s at point %d", kind.c_str(), i));
      ++answered;
    } catch (const DomainError&) {
      chk.expect(pr->status == 422, fmt("empty class at point %d gave %d", i, pr->status));
    }
  }

  Check heat;
  const auto hm = cli.Get("/api/v1/telemetry/heatmap");
  if (!hm || hm->status != 200) {
    heat.expect(false, "heatmap request failed");
  } else {
    const auto j = json::parse(hm->body);
    for (std::size_t r = 0; r < server::kNamedRoles; ++r) {
      double row_max = 0.0;
      std::uint64_t top = 0;
      for (std::size_t c = 0; c < server::kCategories; ++c) {
        top = std::max(top, j["counts"][r][c].get<std::uint64_t>());
      }
      for (std::size_t c = 0; c < server::kCategories; ++c) {
        const double v = j["values"][r][c].get<double>();
        const auto n = j["counts"][r][c].get<std::uint64_t>();
        heat.expect(v == (top ? static_cast<double>(n) / static_cast<double>(top) : 0.0),
                    fmt("cell (%zu,%zu)", r, c));
        row_max = std::max(row_max, v);
      }
      heat.expect(top > 0 && row_max == 1.0, fmt("row %zu max %.3f", r, row_max));
    }
  }
  http.stop();
  serve.join();
  report("api_matches_library", chk.ok(),
         summary(chk, fmt("50 points, %d risk and proximity answers bit-identical", answered)));
  report("usage_heatmap_rows_normalized", heat.ok(), summary(heat, "6 role rows, each max 1"));
}

}  // namespace

int main() {
  const std::string source_dir = TERRATWIN_SOURCE_DIR;
  const auto t0 = Clock::now();
  routing_oracle();
  distance_oracle();
  placement_optimality();
  hazard_classes();
  recall_regression();
  fire_zero_fuel();
  fire_rotation();
  fire_fixture(source_dir);
  fire_escape();
  spread_velocity();
  pipeline_checks();
  representative_validation();
  api_equivalence();
  std::printf("%d failed, %.1f s total\n", g_failed, seconds_since(t0));
  return g_failed == 0 ? 0 : 1;
}
