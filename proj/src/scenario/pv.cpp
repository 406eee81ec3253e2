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

#include "terratwin/scenario/pv.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>

#include "terratwin/common/error.hpp"
#include "terratwin/proximity/distance.hpp"

namespace terratwin::scenario {

void PvConstraints::validate() const {
  auto fail = [](const char* field, const char* rule) {
    throw InvalidArgument(std::string("pv constraint '") + field + "' " + rule);
  };
  if (!(max_slope_deg > 0.0)) fail("max_slope", "must be > 0");
  if (!(max_grid_distance_m > 0.0)) fail("max_grid_distance", "must be > 0");
  if (!(min_area_m2 >= 0.0)) fail("min_area", "must be >= 0");
  if (!(w_insolation >= 0.0)) fail("w_insolation", "must be >= 0");
  if (!(w_flatness >= 0.0)) fail("w_flatness", "must be >= 0");
  if (!(w_grid >= 0.0)) fail("w_grid", "must be >= 0");
  if (std::abs(w_insolation + w_flatness + w_grid - 1.0) > 1e-9) {
    fail("weights", "must sum to 1");
  }
}

namespace {

// Lattice vertex (column, row) with rows counted downward from the top edge.
struct Vertex {
  int col, row;
  auto operator<=>(const Vertex&) const = default;
};

// Directions in lattice terms: east, north, west, south. North is row - 1.
constexpr std::array<std::array<int, 2>, 4> kStep = {{{1, 0}, {0, -1}, {-1, 0}, {0, 1}}};

struct Edge {
  Vertex from;
  int dir;
};

}  // namespace

geo::Polygon trace_outline(const geo::GridSpec& spec,
                           const std::vector<std::size_t>& cells) {
  std::vector<bool> in(spec.cell_count(), false);
  for (std::size_t k : cells) in[k] = true;
  auto member = [&](int r, int c) { return spec.in_bounds(r, c) && in[spec.flat({r, c})]; };

  // Boundary edges with the zone on the left (counter-clockwise outside).
  std::vector<Edge> edges;
  for (std::size_t k : cells) {
    const auto [r, c] = spec.unflat(k);
    if (!member(r + 1, c)) edges.push_back({{c, r + 1}, 0});
    if (!member(r, c + 1)) edges.push_back({{c + 1, r + 1}, 1});
    if (!member(r - 1, c)) edges.push_back({{c + 1, r}, 2});
    if (!member(r, c - 1)) edges.push_back({{c, r}, 3});
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return std::tie(a.from, a.dir) < std::tie(b.from, b.dir);
  });
  std::map<Vertex, std::vector<std::size_t>> outgoing;
  for (std::size_t i = 0; i < edges.size(); ++i) outgoing[edges[i].from].push_back(i);

  std::vector<bool> used(edges.size(), false);
  std::vector<std::vector<geo::Point>> rings;
  for (std::size_t start = 0; start < edges.size(); ++start) {
    if (used[start]) continue;
    std::vector<Vertex> loop;
    std::vector<int> dirs;
    std::size_t e = start;
    while (!used[e]) {
      used[e] = true;
      loop.push_back(edges[e].from);
      dirs.push_back(edges[e].dir);
      const Vertex to{edges[e].from.col + kStep[edges[e].dir][0],
                      edges[e].from.row + kStep[edges[e].dir][1]};
      // At a pinch vertex prefer the left turn so touching loops separate.
      std::size_t next = edges.size();
      for (const int turn : {1, 0, 3}) {
        const int want = (edges[e].dir + turn) % 4;
        for (std::size_t cand : outgoing[to]) {
          if ((!used[cand] || cand == start) && edges[cand].dir == want) {
            next = cand;
            break;
          }
        }
        if (next != edges.size()) break;
      }
      if (next == edges.size() || next == start) break;
      e = next;
    }
    std::vector<geo::Point> ring;
    for (std::size_t i = 0; i < loop.size(); ++i) {
      const int prev = dirs[(i + loop.size() - 1) % loop.size()];
      if (prev == dirs[i]) continue;  // collinear
      ring.push_back({spec.xll + loop[i].col * spec.cellsize,
                      spec.ymax() - loop[i].row * spec.cellsize});
    }
    ring.push_back(ring.front());
    rings.push_back(std::move(ring));
  }
  std::stable_partition(rings.begin(), rings.end(), [](const auto& r) {
    return geo::signed_ring_area(r) > 0.0;
  });
  return geo::Polygon{std::move(rings)};
}

std::vector<PvZone> site_pv(const geo::CountryModel& model,
                            const PvConstraints& c) {
  c.validate();
  for (const char* name : {"slope", "landcover", "insolation", "protected_mask"}) {
    model.layer(name);
  }
  if (model.features.of_kind(geo::FeatureKind::kGridLine).empty()) {
    throw NotFound("missing feature class 'grid_line'");
  }
  return site_pv(model, c,
                 proximity::distance_layer(model.spec, model.features,
                                           geo::FeatureKind::kGridLine));
}

std::vector<PvZone> site_pv(const geo::CountryModel& model,
                            const PvConstraints& c,
                            const geo::RasterLayer& grid_distance) {
  c.validate();
  const geo::GridSpec& spec = model.spec;
  const auto slope = model.layer("slope").values();
  const auto cover = model.layer("landcover").values();
  const auto insolation = model.layer("insolation").values();
  const auto mask = model.layer("protected_mask").values();
  geo::require_aligned(spec, grid_distance);
  const auto dist = grid_distance.values();
  const double nodata = spec.nodata;

  const std::size_t n = spec.cell_count();
  std::vector<bool> ok(n, false);
  double ins_lo = std::numeric_limits<double>::infinity(), ins_hi = -ins_lo;
  for (std::size_t k = 0; k < n; ++k) {
    if (insolation[k] != nodata) {
      ins_lo = std::min(ins_lo, insolation[k]);
      ins_hi = std::max(ins_hi, insolation[k]);
    }
    if (slope[k] == nodata || cover[k] == nodata || insolation[k] == nodata ||
        mask[k] == nodata || dist[k] == nodata) {
      continue;
    }
    const int code = static_cast<int>(cover[k]);
    ok[k] = slope[k] <= c.max_slope_deg && mask[k] == 0.0 &&
            dist[k] <= c.max_grid_distance_m &&
            std::find(c.allowed_landcover.begin(), c.allowed_landcover.end(),
                      code) != c.allowed_landcover.end();
  }

  std::vector<PvZone> zones;
  std::vector<int> label(n, -1);
  int next_id = 0;
  std::vector<std::size_t> stack;
  const double cell_area = spec.cellsize * spec.cellsize;
  for (std::size_t seed = 0; seed < n; ++seed) {
    if (!ok[seed] || label[seed] >= 0) continue;
    const int id = next_id++;
    PvZone z{id, {}, {}, 0.0, 0.0};
    label[seed] = id;
    stack.assign(1, seed);
    while (!stack.empty()) {
      const std::size_t k = stack.back();
      stack.pop_back();
      z.cells.push_back(k);
      const auto [r, col] = spec.unflat(k);
      const int nb[4][2] = {{r - 1, col}, {r + 1, col}, {r, col - 1}, {r, col + 1}};
      for (const auto& q : nb) {
        if (!spec.in_bounds(q[0], q[1])) continue;
        const std::size_t j = spec.flat({q[0], q[1]});
        if (ok[j] && label[j] < 0) {
          label[j] = id;
          stack.push_back(j);
        }
      }
    }
    z.area_m2 = static_cast<double>(z.cells.size()) * cell_area;
    if (z.area_m2 < c.min_area_m2) continue;
    std::sort(z.cells.begin(), z.cells.end());
    double sum = 0.0;
    for (std::size_t k : z.cells) {
      const double ins = ins_hi > ins_lo ? (insolation[k] - ins_lo) / (ins_hi - ins_lo) : 0.0;
      sum += c.w_insolation * ins +
             c.w_flatness * (1.0 - slope[k] / c.max_slope_deg) +
             c.w_grid * (1.0 - dist[k] / c.max_grid_distance_m);
    }
    z.score = sum / static_cast<double>(z.cells.size());
    z.outline = trace_outline(spec, z.cells);
    zones.push_back(std::move(z));
  }
  std::sort(zones.begin(), zones.end(), [](const PvZone& a, const PvZone& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.cells.size() != b.cells.size()) return a.cells.size() > b.cells.size();
    return a.component_id < b.component_id;
  });
  return zones;
}

}  // namespace terratwin::scenario
