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

#ifndef TERRATWIN_GEOMODEL_FEATURE_HPP_
#define TERRATWIN_GEOMODEL_FEATURE_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "terratwin/geomodel/geometry.hpp"

namespace terratwin::geo {

enum class FeatureKind {
  kAmenitySupermarket,
  kAmenityHospital,
  kAmenityPharmacy,
  kAmenitySchool,
  kBeach,
  kBlueFlagBeach,
  kTree,
  kSwimmingPool,
  kBuilding,
  kRegion,
  kProtectedZone,
  kGridLine,
  kUnknown,  // Loaded with a kind string this build does not know.
};

inline constexpr FeatureKind kKnownKinds[] = {
    FeatureKind::kAmenitySupermarket, FeatureKind::kAmenityHospital,
    FeatureKind::kAmenityPharmacy,    FeatureKind::kAmenitySchool,
    FeatureKind::kBeach,              FeatureKind::kBlueFlagBeach,
    FeatureKind::kTree,               FeatureKind::kSwimmingPool,
    FeatureKind::kBuilding,           FeatureKind::kRegion,
    FeatureKind::kProtectedZone,      FeatureKind::kGridLine,
};

std::string_view kind_name(FeatureKind kind);
// nullopt for strings outside the known set.
std::optional<FeatureKind> parse_kind(std::string_view name);

inline constexpr std::string_view kTreeSpecies[] = {
    "pinus_brutia", "pinus_nigra", "olive", "cypress"};
// 1-based code used in species rasters (0 = no tree); nullopt if unknown.
std::optional<int> species_code(std::string_view species);
std::string_view species_name(int code);

using AttributeValue = std::variant<double, std::string>;

struct Feature {
  std::int64_t id = 0;
  FeatureKind kind = FeatureKind::kUnknown;
  // Verbatim kind string; differs from kind_name(kind) only for kUnknown.
  std::string kind_label;
  Geometry geometry;
  std::map<std::string, AttributeValue> attributes;

  std::optional<double> number(const std::string& key) const;
  std::optional<std::string> text(const std::string& key) const;

  friend bool operator==(const Feature&, const Feature&) = default;
};

Feature make_feature(std::int64_t id, FeatureKind kind, Geometry geometry);

class FeatureCollection {
 public:
  FeatureCollection() = default;
  explicit FeatureCollection(std::vector<Feature> features)
      : features_(std::move(features)) {}

  const std::vector<Feature>& all() const { return features_; }
  std::vector<Feature>& mutable_all() { return features_; }
  void add(Feature f) { features_.push_back(std::move(f)); }
  std::size_t size() const { return features_.size(); }
  bool empty() const { return features_.empty(); }

  std::vector<const Feature*> of_kind(FeatureKind kind) const;
  const Feature* find(std::int64_t id) const;
  std::int64_t max_id() const;

  friend bool operator==(const FeatureCollection&,
                         const FeatureCollection&) = default;

 private:
  std::vector<Feature> features_;
};

}  // namespace terratwin::geo

#endif  // TERRATWIN_GEOMODEL_FEATURE_HPP_
