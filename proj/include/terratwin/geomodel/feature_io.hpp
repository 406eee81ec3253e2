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

#ifndef TERRATWIN_GEOMODEL_FEATURE_IO_HPP_
#define TERRATWIN_GEOMODEL_FEATURE_IO_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "terratwin/geomodel/feature.hpp"

namespace terratwin::geo {

struct LoadReport {
  struct Entry {
    std::int64_t id;
    std::string detail;
  };
  // Features kept but whose kind string is not a known kind.
  std::vector<Entry> unknown_kinds;
  // Features dropped because a coordinate lies outside the grid extent.
  std::vector<Entry> rejected;

  bool clean() const { return unknown_kinds.empty() && rejected.empty(); }
};

struct FeatureLoad {
  FeatureCollection features;
  LoadReport report;
};

// `{"features":[{"id","kind","geometry":{"type","coordinates"},
// "properties"}]}`. Structural problems (bad JSON, missing fields, open or
// self-intersecting rings, duplicate ids) throw ParseError. When `extent` is
// given, features with any vertex outside it are dropped and reported.
FeatureLoad parse_features(std::string_view text,
                           const std::optional<GridSpec>& extent = {});
std::string format_features(const FeatureCollection& collection);

FeatureLoad read_features(const std::filesystem::path& path,
                          const std::optional<GridSpec>& extent = {});
void write_features(const FeatureCollection& collection,
                    const std::filesystem::path& path);

nlohmann::json geometry_to_json(const Geometry& g);
Geometry geometry_from_json(const nlohmann::json& j);

}  // namespace terratwin::geo

#endif  // TERRATWIN_GEOMODEL_FEATURE_IO_HPP_
