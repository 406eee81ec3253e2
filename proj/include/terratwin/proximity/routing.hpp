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

#ifndef TERRATWIN_PROXIMITY_ROUTING_HPP_
#define TERRATWIN_PROXIMITY_ROUTING_HPP_

#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "terratwin/proximity/road_network.hpp"
#include "terratwin/proximity/spatial_index.hpp"

namespace terratwin::proximity {

inline constexpr double kUnreachable = std::numeric_limits<double>::infinity();

// Minutes to traverse edge `e`.
using EdgeCost = std::function<double(const RoadEdge& e)>;

EdgeCost driving_cost(const SpeedTable& speeds = {});

// Multi-source Dijkstra. Result is indexed by dense node index; unreachable
// nodes hold kUnreachable. Settling stops once times exceed `limit`.
std::vector<double> shortest_times(const RoadNetwork& net,
                                   std::span<const NodeId> sources,
                                   const EdgeCost& cost,
                                   double limit = kUnreachable);

// Driving minutes origin -> dest; kUnreachable when disconnected. Throws
// NotFound for unknown ids.
double travel_time(const RoadNetwork& net, NodeId origin, NodeId dest,
                   const SpeedTable& speeds = {});

// Nodes whose multi-source driving time is <= budget_minutes, ascending by
// id. Throws InvalidArgument for a negative budget or empty source set.
std::vector<NodeId> isochrone(const RoadNetwork& net,
                              std::span<const NodeId> sources,
                              double budget_minutes,
                              const SpeedTable& speeds = {});

// Nearest node by euclidean distance, ties by smallest id.
class NodeLocator {
 public:
  NodeLocator() = default;
  explicit NodeLocator(const RoadNetwork& net);
  NodeId snap(geo::Point p) const;

 private:
  SpatialIndex index_;
};

// One-off snap; throws DomainError on an empty network.
NodeId snap(const RoadNetwork& net, geo::Point p);

struct Path {
  std::vector<NodeId> nodes;
  double minutes = kUnreachable;
};

// Single-pair shortest path with explicit node sequence.
Path shortest_path(const RoadNetwork& net, NodeId origin, NodeId dest,
                   const EdgeCost& cost);

}  // namespace terratwin::proximity

#endif  // TERRATWIN_PROXIMITY_ROUTING_HPP_
