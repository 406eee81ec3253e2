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

#include "terratwin/proximity/road_network.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "terratwin/common/checksum.hpp"
#include "terratwin/common/error.hpp"

namespace terratwin::proximity {

std::string_view road_class_name(RoadClass c) {
  switch (c) {
    case RoadClass::kHighway:
      return "highway";
    case RoadClass::kPrimary:
      return "primary";
    case RoadClass::kSecondary:
      return "secondary";
    case RoadClass::kDirt:
      return "dirt";
  }
  return "";
}

std::optional<RoadClass> parse_road_class(std::string_view name) {
  for (RoadClass c : {RoadClass::kHighway, RoadClass::kPrimary,
                      RoadClass::kSecondary, RoadClass::kDirt}) {
    if (road_class_name(c) == name) return c;
  }
  return std::nullopt;
}

double SpeedTable::kmh(RoadClass c) const {
  switch (c) {
    case RoadClass::kHighway:
      return highway;
    case RoadClass::kPrimary:
      return primary;
    case RoadClass::kSecondary:
      return secondary;
    case RoadClass::kDirt:
      return dirt;
  }
  return dirt;
}

RoadNetwork::RoadNetwork(std::vector<RoadNode> nodes,
                         std::vector<RoadEdge> edges)
    : nodes_(std::move(nodes)), edges_(std::move(edges)) {
  std::sort(nodes_.begin(), nodes_.end(),
            [](const RoadNode& a, const RoadNode& b) { return a.id < b.id; });
  index_.reserve(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (!index_.emplace(nodes_[i].id, i).second) {
      throw InvalidArgument("road network: duplicate node id " +
                            std::to_string(nodes_[i].id));
    }
  }
  adj_.assign(nodes_.size(), {});
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    const auto& edge = edges_[e];
    const auto ia = index_.find(edge.a);
    const auto ib = index_.find(edge.b);
    if (ia == index_.end() || ib == index_.end()) {
      throw InvalidArgument("road network: edge " + std::to_string(e) +
                            " references a missing node");
    }
    if (!(edge.length > 0.0) || !std::isfinite(edge.length)) {
      throw InvalidArgument("road network: edge " + std::to_string(e) +
                            " must have length > 0");
    }
    const auto& pa = nodes_[ia->second].pos;
    const auto& pb = nodes_[ib->second].pos;
    const double straight = std::hypot(pa.x - pb.x, pa.y - pb.y);
    if (edge.length < straight - 1e-6) {
      throw InvalidArgument("road network: edge " + std::to_string(e) +
                            " is shorter than the distance between its ends");
    }
    adj_[ia->second].push_back({ib->second, e});
    if (ia->second != ib->second) adj_[ib->second].push_back({ia->second, e});
  }
}

std::optional<std::size_t> RoadNetwork::index_of(NodeId id) const {
  const auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t RoadNetwork::require_index(NodeId id) const {
  const auto idx = index_of(id);
  if (!idx) throw NotFound("unknown road node " + std::to_string(id));
  return *idx;
}

RoadNetwork parse_road_network(std::string_view text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  try {
    std::vector<RoadNode> nodes;
    for (const auto& n : doc.at("nodes")) {
      nodes.push_back({n.at("id").get<NodeId>(),
                       {n.at("x").get<double>(), n.at("y").get<double>()}});
    }
    std::unordered_map<NodeId, geo::Point> pos;
    for (const auto& n : nodes) pos[n.id] = n.pos;
    std::vector<RoadEdge> edges;
    for (const auto& e : doc.at("edges")) {
      RoadEdge edge;
      edge.a = e.at("a").get<NodeId>();
      edge.b = e.at("b").get<NodeId>();
      const auto cls = parse_road_class(e.at("class").get<std::string>());
      if (!cls) {
        throw ParseError("unknown road class '" +
                         e.at("class").get<std::string>() + "'");
      }
      edge.road_class = *cls;
      if (e.contains("length") && !e["length"].is_null()) {
        edge.length = e["length"].get<double>();
      } else {
        const auto ia = pos.find(edge.a);
        const auto ib = pos.find(edge.b);
        if (ia == pos.end() || ib == pos.end()) {
          throw ParseError("edge references a missing node");
        }
        edge.length =
            std::hypot(ia->second.x - ib->second.x, ia->second.y - ib->second.y);
      }
      edges.push_back(edge);
    }
    return RoadNetwork(std::move(nodes), std::move(edges));
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed road network: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw ParseError(e.what());
  }
}

std::string format_road_network(const RoadNetwork& net) {
  using nlohmann::json;
  json nodes = json::array();
  for (const auto& n : net.nodes()) {
    nodes.push_back({{"id", n.id}, {"x", n.pos.x}, {"y", n.pos.y}});
  }
  json edges = json::array();
  for (const auto& e : net.edges()) {
    edges.push_back({{"a", e.a},
                     {"b", e.b},
                     {"class", std::string(road_class_name(e.road_class))},
                     {"length", e.length}});
  }
  return json{{"nodes", nodes}, {"edges", edges}}.dump(1) + "\n";
}

RoadNetwork read_road_network(const std::filesystem::path& path) {
  return parse_road_network(read_file(path));
}

void write_road_network(const RoadNetwork& net,
                        const std::filesystem::path& path) {
  write_file_atomic(path, format_road_network(net));
}

}  // namespace terratwin::proximity
