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
#include <set>

#include "terratwin/common/error.hpp"
#include "terratwin/common/rng.hpp"
#include "terratwin/proximity/distance.hpp"
#include "terratwin/proximity/road_network.hpp"
#include "terratwin/proximity/routing.hpp"
#include "terratwin/proximity/spatial_index.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace terratwin;
using namespace terratwin::proximity;
using geo::Point;

namespace {

geo::Geometry random_geometry(Rng& rng, double extent) {
  const Point a{rng.uniform(0.0, extent), rng.uniform(0.0, extent)};
  switch (rng.below(3)) {
    case 0:
      return a;
    case 1: {
      geo::LineString line{{a}};
      const int n = 1 + static_cast<int>(rng.below(4));
      for (int i = 0; i < n; ++i) {
        line.points.push_back({line.points.back().x + rng.uniform(-300.0, 300.0),
                               line.points.back().y + rng.uniform(-300.0, 300.0)});
      }
      return line;
    }
    default: {
      const double w = rng.uniform(20.0, 300.0);
      const double h = rng.uniform(20.0, 300.0);
      return geo::Polygon{{{a, {a.x + w, a.y}, {a.x + w, a.y + h}, {a.x, a.y + h}, a}}};
    }
  }
}

// Brute-force nearest with the smallest-id tie rule.
NearestHit brute_nearest(const std::vector<geo::Feature>& fs, Point p) {
  NearestHit best{0, INFINITY};
  for (const auto& f : fs) {
    const double d = oracle::geometry_distance(p, f.geometry);
    if (d < best.distance || (d == best.distance && f.id < best.id)) best = {f.id, d};
  }
  return best;
}

RoadNetwork line_graph(int n, double minutes_per_edge) {
  // Secondary roads: 40 km/h, so one minute covers 2000/3 m.
  std::vector<RoadNode> nodes;
  std::vector<RoadEdge> edges;
  const double len = minutes_per_edge * 40000.0 / 60.0;
  for (int i = 0; i < n; ++i) nodes.push_back({i, {i * len, 0.0}});
  for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, RoadClass::kSecondary, len});
  return RoadNetwork(nodes, edges);
}

std::vector<NodeId> sorted(std::vector<NodeId> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

TEST_CASE("nearest amenity examples") {
  geo::FeatureCollection fc;
  const Point p{1000.0, 1000.0};
  fc.add(geo::make_feature(1, geo::FeatureKind::kAmenityPharmacy, Point{1100.0, 1000.0}));
  fc.add(geo::make_feature(2, geo::FeatureKind::kAmenityPharmacy, Point{1000.0, 1250.0}));
  fc.add(geo::make_feature(3, geo::FeatureKind::kAmenityPharmacy, Point{930.0, 1000.0}));
  fc.add(geo::make_feature(4, geo::FeatureKind::kAmenitySchool, Point{1000.0, 1000.0}));
  const FeatureIndex index(fc);
  const auto hit = nearest(index, p, geo::FeatureKind::kAmenityPharmacy);
  CHECK(hit.id == 3);
  CHECK(hit.distance == doctest::Approx(70.0).epsilon(1e-12));
  CHECK(nearest(index, p, geo::FeatureKind::kAmenitySchool) == NearestHit{4, 0.0});
  CHECK_THROWS_AS(nearest(index, p, geo::FeatureKind::kBeach), DomainError);
  try {
    nearest(index, p, geo::FeatureKind::kBeach);
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("empty class") != std::string::npos);
  }
}

TEST_CASE("nearest ties resolve to the smallest id") {
  geo::FeatureCollection fc;
  fc.add(geo::make_feature(9, geo::FeatureKind::kTree, Point{10.0, 0.0}));
  fc.add(geo::make_feature(5, geo::FeatureKind::kTree, Point{-10.0, 0.0}));
  fc.add(geo::make_feature(7, geo::FeatureKind::kTree, Point{0.0, 10.0}));
  CHECK(nearest(FeatureIndex(fc), {0.0, 0.0}, geo::FeatureKind::kTree).id == 5);
}

TEST_CASE("index queries match brute force on random inputs") {
  Rng rng(77);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<geo::Feature> fs;
    geo::FeatureCollection fc;
    const int n = 5 + static_cast<int>(rng.below(80));
    for (int i = 0; i < n; ++i) {
      auto f = geo::make_feature(100 + i * 3, geo::FeatureKind::kBuilding, random_geometry(rng, 8000.0));
      fs.push_back(f);
      fc.add(f);
    }
    const FeatureIndex index(fc);
    for (int q = 0; q < 200; ++q) {
      const Point p{rng.uniform(-2000.0, 10000.0), rng.uniform(-2000.0, 10000.0)};
      const auto got = nearest(index, p, geo::FeatureKind::kBuilding);
      const auto want = brute_nearest(fs, p);
      CHECK(got.id == want.id);
      CHECK(got.distance == want.distance);

      const double radius = rng.uniform(0.0, 1500.0);
      std::vector<std::int64_t> expect;
      for (const auto& f : fs) {
        if (oracle::geometry_distance(p, f.geometry) <= radius) expect.push_back(f.id);
      }
      std::sort(expect.begin(), expect.end());
      CHECK(index.within(p, radius, geo::FeatureKind::kBuilding) == expect);
    }
  }
}

TEST_CASE("distance layer examples") {
  const geo::GridSpec spec{8, 6, 0.0, 0.0, 50.0, -9999.0};
  const Point centre = spec.center({2, 3});
  const std::vector<geo::Geometry> one{centre};
  const auto layer = distance_layer(spec, one, "d");
  CHECK(layer.at(2, 3) == 0.0);
  CHECK(layer.at(1, 3) == 50.0);
  CHECK(layer.at(3, 3) == 50.0);
  CHECK(layer.at(2, 2) == 50.0);
  CHECK(layer.at(2, 4) == 50.0);

  const double x0 = 137.0;
  const std::vector<geo::Geometry> vline{geo::LineString{{{x0, -100.0}, {x0, 1000.0}}}};
  const auto lines = distance_layer(spec, vline, "v");
  for (int r = 0; r < spec.nrows; ++r) {
    for (int c = 0; c < spec.ncols; ++c) {
      CHECK(lines.at(r, c) == std::abs(spec.center({r, c}).x - x0));
    }
  }
  CHECK_THROWS(distance_layer(spec, std::vector<geo::Geometry>{}, "none"));
}

TEST_CASE("distance layer equals brute force and is 1-Lipschitz") {
  Rng rng(8);
  const geo::GridSpec spec{48, 40, 500.0, 900.0, 30.0, -9999.0};
  std::vector<geo::Geometry> geoms;
  for (int i = 0; i < 12; ++i) geoms.push_back(random_geometry(rng, 1500.0));
  const auto layer = distance_layer(spec, geoms, "d");
  const auto expect = oracle::distance_grid(spec, geoms);
  for (std::size_t k = 0; k < expect.size(); ++k) CHECK(layer.values()[k] == expect[k]);
  for (int r = 0; r < spec.nrows; ++r) {
    for (int c = 0; c + 1 < spec.ncols; ++c) {
      CHECK(std::abs(layer.at(r, c) - layer.at(r, c + 1)) <= spec.cellsize + 1e-9);
      if (r + 1 < spec.nrows) {
        CHECK(std::abs(layer.at(r, c) - layer.at(r + 1, c)) <= spec.cellsize + 1e-9);
      }
    }
  }
}

TEST_CASE("travel time examples") {
  const RoadNetwork net({{1, {0, 0}}, {2, {1500, 0}}, {3, {9000, 9000}}},
                        {{1, 2, RoadClass::kSecondary, 1500.0}});
  CHECK(travel_time(net, 1, 1) == 0.0);
  CHECK(travel_time(net, 1, 2) == doctest::Approx(2.25).epsilon(1e-12));
  CHECK(travel_time(net, 1, 3) == kUnreachable);
  CHECK_THROWS_AS(travel_time(net, 1, 42), NotFound);
  SpeedTable fast;
  fast.secondary = 60.0;
  CHECK(travel_time(net, 2, 1, fast) == doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("travel times match all-pairs oracle and satisfy the triangle inequality") {
  Rng rng(19);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(29));
    const auto net = fixture::random_network(rng, n, static_cast<int>(rng.below(n + 1)),
                                             trial % 3 != 0);
    const auto all = oracle::floyd_warshall(net);
    for (int i = 0; i < n; ++i) {
      const NodeId src = net.node_at(i).id;
      const auto times = shortest_times(net, std::span<const NodeId>(&src, 1), driving_cost());
      for (int j = 0; j < n; ++j) {
        if (all[i][j] == INFINITY) {
          CHECK(times[j] == kUnreachable);
        } else {
          CHECK(std::abs(times[j] - all[i][j]) <= 1e-9 * std::max(1.0, all[i][j]));
        }
      }
    }
    for (int t = 0; t < 20; ++t) {
      const auto a = net.node_at(rng.below(n)).id;
      const auto b = net.node_at(rng.below(n)).id;
      const auto c = net.node_at(rng.below(n)).id;
      const double ab = travel_time(net, a, b);
      const double bc = travel_time(net, b, c);
      const double ac = travel_time(net, a, c);
      if (ab != kUnreachable && bc != kUnreachable) CHECK(ac <= ab + bc + 1e-9);
    }
  }
}

TEST_CASE("isochrone examples") {
  const auto line = line_graph(6, 1.0);
  const NodeId zero = 0;
  const std::span<const NodeId> src(&zero, 1);
  CHECK(sorted(isochrone(line, src, 2.5)) == std::vector<NodeId>{0, 1, 2});
  CHECK(sorted(isochrone(line, src, 0.0)) == std::vector<NodeId>{0});
  CHECK(sorted(isochrone(line, src, kUnreachable)).size() == 6);
  CHECK_THROWS_AS(isochrone(line, src, -1.0), InvalidArgument);
  CHECK_THROWS_AS(isochrone(line, std::span<const NodeId>(), 1.0), InvalidArgument);
}

TEST_CASE("isochrone is the sub-level set of multi-source times and monotone") {
  Rng rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 3 + static_cast<int>(rng.below(40));
    const auto net = fixture::random_network(rng, n, n / 2, trial % 2 == 0);
    const auto all = oracle::floyd_warshall(net);
    std::vector<NodeId> sources;
    std::vector<int> src_idx;
    for (int i = 0; i < n; ++i) {
      if (rng.uniform() < 0.15 || i == 0) {
        sources.push_back(net.node_at(i).id);
        src_idx.push_back(i);
      }
    }
    std::vector<NodeId> previous;
    for (double T : {0.0, 1.0, 3.0, 7.5, 20.0, kUnreachable}) {
      const auto got = sorted(isochrone(net, sources, T));
      std::vector<NodeId> want;
      for (int j = 0; j < n; ++j) {
        double best = INFINITY;
        for (int s : src_idx) best = std::min(best, all[s][j]);
        // Skip nodes within rounding distance of the budget.
        if (best != INFINITY && std::abs(best - T) < 1e-9) continue;
        if (best != INFINITY && best <= T) want.push_back(net.node_at(j).id);
      }
      std::sort(want.begin(), want.end());
      std::vector<NodeId> got_filtered;
      for (NodeId id : got) {
        const int j = static_cast<int>(*net.index_of(id));
        double best = INFINITY;
        for (int s : src_idx) best = std::min(best, all[s][j]);
        CHECK(best != INFINITY);
        if (!(std::abs(best - T) < 1e-9)) got_filtered.push_back(id);
      }
      CHECK(got_filtered == want);
      CHECK(std::includes(got.begin(), got.end(), previous.begin(), previous.end()));
      previous = got;
    }
  }
}

TEST_CASE("snap picks the nearest node with id ties") {
  const RoadNetwork net({{5, {0, 0}}, {2, {10, 0}}, {9, {5, 8}}}, {});
  CHECK(snap(net, {0, 0}) == 5);
  CHECK(snap(net, {5, 0}) == 2);
  CHECK(snap(net, {5, 7}) == 9);
  CHECK_THROWS_AS(snap(RoadNetwork(), {0, 0}), DomainError);

  Rng rng(4);
  const auto big = fixture::random_network(rng, 60, 10, true);
  const NodeLocator locator(big);
  for (int q = 0; q < 200; ++q) {
    const Point p{rng.uniform(-500.0, 5500.0), rng.uniform(-500.0, 5500.0)};
    NodeId best = 0;
    double best_d = INFINITY;
    for (const auto& node : big.nodes()) {
      const double d = std::hypot(node.pos.x - p.x, node.pos.y - p.y);
      if (d < best_d || (d == best_d && node.id < best)) {
        best = node.id;
        best_d = d;
      }
    }
    CHECK(locator.snap(p) == best);
    CHECK(snap(big, p) == best);
  }
}

TEST_CASE("shortest path is consistent with travel time") {
  Rng rng(31);
  const auto net = fixture::random_network(rng, 25, 15, true);
  for (int q = 0; q < 30; ++q) {
    const NodeId a = net.node_at(rng.below(25)).id;
    const NodeId b = net.node_at(rng.below(25)).id;
    const auto path = shortest_path(net, a, b, driving_cost());
    REQUIRE(!path.nodes.empty());
    CHECK(path.nodes.front() == a);
    CHECK(path.nodes.back() == b);
    CHECK(std::abs(path.minutes - travel_time(net, a, b)) <= 1e-9 * std::max(1.0, path.minutes));
  }
}

TEST_CASE("road network file format") {
  const std::string text = R"({"nodes":[{"id":1,"x":0,"y":0},{"id":2,"x":300,"y":400}],
    "edges":[{"a":1,"b":2,"class":"dirt"}]})";
  const auto net = parse_road_network(text);
  REQUIRE(net.edges().size() == 1);
  CHECK(net.edges()[0].length == 500.0);
  CHECK(parse_road_network(format_road_network(net)) == net);
  CHECK_THROWS(parse_road_network(R"({"nodes":[{"id":1,"x":0,"y":0}],
    "edges":[{"a":1,"b":3,"class":"dirt"}]})"));
  CHECK_THROWS(parse_road_network(R"({"nodes":[{"id":1,"x":0,"y":0},{"id":2,"x":300,"y":400}],
    "edges":[{"a":1,"b":2,"class":"dirt","length":10}]})"));
  CHECK_THROWS(parse_road_network(R"({"nodes":[{"id":1,"x":0,"y":0},{"id":2,"x":3,"y":4}],
    "edges":[{"a":1,"b":2,"class":"motorway"}]})"));
}
