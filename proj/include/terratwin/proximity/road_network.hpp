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

#ifndef TERRATWIN_PROXIMITY_ROAD_NETWORK_HPP_
#define TERRATWIN_PROXIMITY_ROAD_NETWORK_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "terratwin/geomodel/grid.hpp"

namespace terratwin::proximity {

using NodeId = std::int64_t;

enum class RoadClass { kHighway, kPrimary, kSecondary, kDirt };

std::string_view road_class_name(RoadClass c);
std::optional<RoadClass> parse_road_class(std::string_view name);

// Free-flow speeds in km/h.
struct SpeedTable {
  double highway = 90.0;
  double primary = 60.0;
  double secondary = 40.0;
  double dirt = 20.0;

  double kmh(RoadClass c) const;
  // Minutes needed to drive `length_m` meters on a road of class c.
  double minutes(RoadClass c, double length_m) const {
    return length_m / (kmh(c) * 1000.0 / 60.0);
  }
};

struct RoadNode {
  NodeId id;
  geo::Point pos;
  friend bool operator==(const RoadNode&, const RoadNode&) = default;
};

struct RoadEdge {
  NodeId a;
  NodeId b;
  RoadClass road_class;
  double length;  // meters
  friend bool operator==(const RoadEdge&, const RoadEdge&) = default;
};

// Undirected road graph. Nodes are kept sorted by id; adjacency is indexed by
// the dense node position.
class RoadNetwork {
 public:
  RoadNetwork() = default;
  // Throws InvalidArgument when ids repeat, an edge endpoint is missing,
  // length <= 0, or length is shorter than the straight-line distance.
  RoadNetwork(std::vector<RoadNode> nodes, std::vector<RoadEdge> edges);

  struct Arc {
    std::size_t to;  // dense index
    std::size_t edge;
  };

  const std::vector<RoadNode>& nodes() const { return nodes_; }
  const std::vector<RoadEdge>& edges() const { return edges_; }
  std::size_t node_count() const { return nodes_.size(); }
  bool empty() const { return nodes_.empty(); }

  std::optional<std::size_t> index_of(NodeId id) const;
  // Throws NotFound for unknown ids.
  std::size_t require_index(NodeId id) const;
  const RoadNode& node_at(std::size_t index) const { return nodes_[index]; }
  const std::vector<Arc>& arcs(std::size_t index) const { return adj_[index]; }

  friend bool operator==(const RoadNetwork& a, const RoadNetwork& b) {
    return a.nodes_ == b.nodes_ && a.edges_ == b.edges_;
  }

 private:
  std::vector<RoadNode> nodes_;
  std::vector<RoadEdge> edges_;
  std::unordered_map<NodeId, std::size_t> index_;
  std::vector<std::vector<Arc>> adj_;
};

// `{"nodes":[{"id","x","y"}],"edges":[{"a","b","class","length"?}]}`; a
// missing length is the euclidean distance between the endpoints.
RoadNetwork parse_road_network(std::string_view text);
std::string format_road_network(const RoadNetwork& net);
RoadNetwork read_road_network(const std::filesystem::path& path);
void write_road_network(const RoadNetwork& net,
                        const std::filesystem::path& path);

}  // namespace terratwin::proximity

#endif  // TERRATWIN_PROXIMITY_ROAD_NETWORK_HPP_
