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

#include "terratwin/proximity/routing.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <utility>

#include "terratwin/common/error.hpp"

namespace terratwin::proximity {
namespace {

using QueueEntry = std::pair<double, std::size_t>;
using MinQueue = std::priority_queue<QueueEntry, std::vector<QueueEntry>,
                                     std::greater<QueueEntry>>;

void run_dijkstra(const RoadNetwork& net, MinQueue& queue,
                  std::vector<double>& dist, std::vector<std::size_t>* parent,
                  const EdgeCost& cost, double limit) {
  while (!queue.empty()) {
    const auto [d, u] = queue.top();
    queue.pop();
    if (d > dist[u]) continue;
    if (d > limit) break;
    for (const auto& arc : net.arcs(u)) {
      const double nd = d + cost(net.edges()[arc.edge]);
      if (nd < dist[arc.to]) {
        dist[arc.to] = nd;
        if (parent) (*parent)[arc.to] = u;
        queue.push({nd, arc.to});
      }
    }
  }
}

}  // namespace

EdgeCost driving_cost(const SpeedTable& speeds) {
  return [speeds](const RoadEdge& e) {
    return speeds.minutes(e.road_class, e.length);
  };
}

std::vector<double> shortest_times(const RoadNetwork& net,
                                   std::span<const NodeId> sources,
                                   const EdgeCost& cost, double limit) {
  std::vector<double> dist(net.node_count(), kUnreachable);
  MinQueue queue;
  for (const NodeId s : sources) {
    const std::size_t i = net.require_index(s);
    if (dist[i] > 0.0) {
      dist[i] = 0.0;
      queue.push({0.0, i});
    }
  }
  run_dijkstra(net, queue, dist, nullptr, cost, limit);
  return dist;
}

double travel_time(const RoadNetwork& net, NodeId origin, NodeId dest,
                   const SpeedTable& speeds) {
  const std::size_t target = net.require_index(dest);
  const NodeId src[] = {origin};
  return shortest_times(net, src, driving_cost(speeds))[target];
}

std::vector<NodeId> isochrone(const RoadNetwork& net,
                              std::span<const NodeId> sources,
                              double budget_minutes, const SpeedTable& speeds) {
  if (std::isnan(budget_minutes) || budget_minutes < 0.0) {
    throw InvalidArgument("isochrone: time budget must be >= 0");
  }
  if (sources.empty()) {
    throw InvalidArgument("isochrone: source set is empty");
  }
  const auto dist =
      shortest_times(net, sources, driving_cost(speeds), budget_minutes);
  std::vector<NodeId> out;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    if (dist[i] != kUnreachable && dist[i] <= budget_minutes) {
      out.push_back(net.node_at(i).id);
    }
  }
  return out;
}

NodeLocator::NodeLocator(const RoadNetwork& net) {
  std::vector<SpatialIndex::Item> items;
  items.reserve(net.node_count());
  for (const auto& n : net.nodes()) items.push_back({n.id, n.pos});
  index_ = SpatialIndex(std::move(items));
}

NodeId NodeLocator::snap(geo::Point p) const {
  if (index_.empty()) throw DomainError("snap: road network is empty");
  return index_.nearest(p).id;
}

NodeId snap(const RoadNetwork& net, geo::Point p) {
  return NodeLocator(net).snap(p);
}

Path shortest_path(const RoadNetwork& net, NodeId origin, NodeId dest,
                   const EdgeCost& cost) {
  const std::size_t s = net.require_index(origin);
  const std::size_t t = net.require_index(dest);
  std::vector<double> dist(net.node_count(), kUnreachable);
  std::vector<std::size_t> parent(net.node_count(), SIZE_MAX);
  MinQueue queue;
  dist[s] = 0.0;
  queue.push({0.0, s});
  run_dijkstra(net, queue, dist, &parent, cost, kUnreachable);
  Path path;
  if (std::isinf(dist[t])) return path;
  path.minutes = dist[t];
  for (std::size_t v = t; v != SIZE_MAX; v = parent[v]) {
    path.nodes.push_back(net.node_at(v).id);
    if (v == s) break;
  }
  std::reverse(path.nodes.begin(), path.nodes.end());
  return path;
}

}  // namespace terratwin::proximity
