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

#include "terratwin/geomodel/feature_io.hpp"

#include <set>

#include "terratwin/common/checksum.hpp"
#include "terratwin/common/error.hpp"

namespace terratwin::geo {
namespace {

using nlohmann::json;

Point point_from(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() ||
      !j[1].is_number()) {
    throw ParseError("coordinate must be [x,y]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

std::vector<Point> path_from(const json& j) {
  if (!j.is_array()) throw ParseError("expected coordinate array");
  std::vector<Point> pts;
  pts.reserve(j.size());
  for (const auto& c : j) pts.push_back(point_from(c));
  return pts;
}

json path_to(const std::vector<Point>& pts) {
  json arr = json::array();
  for (const auto& p : pts) arr.push_back({p.x, p.y});
  return arr;
}

bool all_inside(const Geometry& g, const GridSpec& spec) {
  const Box b = bounding_box(g);
  return spec.contains({b.xmin, b.ymin}) && spec.contains({b.xmax, b.ymax});
}

}  // namespace

json geometry_to_json(const Geometry& g) {
  if (const auto* p = std::get_if<Point>(&g)) {
    return {{"type", "Point"}, {"coordinates", {p->x, p->y}}};
  }
  if (const auto* l = std::get_if<LineString>(&g)) {
    return {{"type", "LineString"}, {"coordinates", path_to(l->points)}};
  }
  json rings = json::array();
  for (const auto& r : std::get<Polygon>(g).rings) rings.push_back(path_to(r));
  return {{"type", "Polygon"}, {"coordinates", rings}};
}

Geometry geometry_from_json(const json& j) {
  if (!j.is_object() || !j.contains("type") || !j.contains("coordinates")) {
    throw ParseError("geometry needs 'type' and 'coordinates'");
  }
  const auto type = j.at("type").get<std::string>();
  const auto& coords = j.at("coordinates");
  if (type == "Point") return point_from(coords);
  if (type == "LineString") {
    LineString l{path_from(coords)};
    if (l.points.size() < 2) {
      throw ParseError("LineString needs at least 2 points");
    }
    return l;
  }
  if (type == "Polygon") {
    if (!coords.is_array() || coords.empty()) {
      throw ParseError("Polygon needs at least one ring");
    }
    Polygon poly;
    for (const auto& ring_json : coords) {
      auto ring = path_from(ring_json);
      if (!ring_closed(ring)) throw ParseError("ring not closed");
      if (ring_self_intersects(ring)) {
        throw ParseError("ring self-intersects");
      }
      poly.rings.push_back(std::move(ring));
    }
    return poly;
  }
  throw ParseError("unsupported geometry type '" + type + "'");
}

FeatureLoad parse_features(std::string_view text,
                           const std::optional<GridSpec>& extent) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("features") ||
      !doc["features"].is_array()) {
    throw ParseError("expected object with a 'features' array");
  }
  FeatureLoad out;
  std::set<std::int64_t> seen;
  for (const auto& fj : doc["features"]) {
    try {
      if (!fj.is_object() || !fj.contains("id") || !fj["id"].is_number_integer()) {
        throw ParseError("feature needs an integer 'id'");
      }
      Feature f;
      f.id = fj["id"].get<std::int64_t>();
      if (!seen.insert(f.id).second) {
        throw ParseError("duplicate feature id " + std::to_string(f.id));
      }
      if (!fj.contains("kind") || !fj["kind"].is_string()) {
        throw ParseError("feature " + std::to_string(f.id) +
                         " needs a string 'kind'");
      }
      f.kind_label = fj["kind"].get<std::string>();
      f.kind = parse_kind(f.kind_label).value_or(FeatureKind::kUnknown);
      if (!fj.contains("geometry")) {
        throw ParseError("feature " + std::to_string(f.id) +
                         " has no geometry");
      }
      try {
        f.geometry = geometry_from_json(fj["geometry"]);
      } catch (const ParseError& e) {
        throw ParseError("feature " + std::to_string(f.id) + ": " + e.what());
      }
      if (fj.contains("properties")) {
        const auto& props = fj["properties"];
        if (!props.is_object()) {
          throw ParseError("feature " + std::to_string(f.id) +
                           ": 'properties' must be an object");
        }
        for (const auto& [key, value] : props.items()) {
          if (value.is_number()) {
            f.attributes[key] = value.get<double>();
          } else if (value.is_string()) {
            f.attributes[key] = value.get<std::string>();
          } else {
            throw ParseError("feature " + std::to_string(f.id) +
                             ": property '" + key +
                             "' must be a number or string");
          }
        }
      }
      if (extent && !all_inside(f.geometry, *extent)) {
        out.report.rejected.push_back({f.id, "outside grid extent"});
        continue;
      }
      if (f.kind == FeatureKind::kUnknown) {
        out.report.unknown_kinds.push_back({f.id, f.kind_label});
      }
      out.features.add(std::move(f));
    } catch (const json::exception& e) {
      throw ParseError(std::string("malformed feature: ") + e.what());
    }
  }
  return out;
}

std::string format_features(const FeatureCollection& collection) {
  json features = json::array();
  for (const auto& f : collection.all()) {
    json props = json::object();
    for (const auto& [key, value] : f.attributes) {
      if (const auto* d = std::get_if<double>(&value)) {
        props[key] = *d;
      } else {
        props[key] = std::get<std::string>(value);
      }
    }
    features.push_back({{"id", f.id},
                        {"kind", f.kind_label},
                        {"geometry", geometry_to_json(f.geometry)},
                        {"properties", props}});
  }
  return json{{"features", features}}.dump(1) + "\n";
}

FeatureLoad read_features(const std::filesystem::path& path,
                          const std::optional<GridSpec>& extent) {
  return parse_features(read_file(path), extent);
}

void write_features(const FeatureCollection& collection,
                    const std::filesystem::path& path) {
  write_file_atomic(path, format_features(collection));
}

}  // namespace terratwin::geo
