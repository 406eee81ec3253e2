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

#include "terratwin/geomodel/feature.hpp"

#include <algorithm>
#include <array>
#include <utility>

namespace terratwin::geo {
namespace {

constexpr std::array<std::pair<FeatureKind, std::string_view>, 12> kNames{{
    {FeatureKind::kAmenitySupermarket, "amenity_supermarket"},
    {FeatureKind::kAmenityHospital, "amenity_hospital"},
    {FeatureKind::kAmenityPharmacy, "amenity_pharmacy"},
    {FeatureKind::kAmenitySchool, "amenity_school"},
    {FeatureKind::kBeach, "beach"},
    {FeatureKind::kBlueFlagBeach, "blue_flag_beach"},
    {FeatureKind::kTree, "tree"},
    {FeatureKind::kSwimmingPool, "swimming_pool"},
    {FeatureKind::kBuilding, "building"},
    {FeatureKind::kRegion, "region"},
    {FeatureKind::kProtectedZone, "protected_zone"},
    {FeatureKind::kGridLine, "grid_line"},
}};

}  // namespace

std::string_view kind_name(FeatureKind kind) {
  for (const auto& [k, name] : kNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

std::optional<FeatureKind> parse_kind(std::string_view name) {
  for (const auto& [k, n] : kNames) {
    if (n == name) return k;
  }
  return std::nullopt;
}

std::optional<int> species_code(std::string_view species) {
  for (std::size_t i = 0; i < std::size(kTreeSpecies); ++i) {
    if (kTreeSpecies[i] == species) return static_cast<int>(i) + 1;
  }
  return std::nullopt;
}

std::string_view species_name(int code) {
  if (code < 1 || code > static_cast<int>(std::size(kTreeSpecies))) return "";
  return kTreeSpecies[code - 1];
}

std::optional<double> Feature::number(const std::string& key) const {
  const auto it = attributes.find(key);
  if (it == attributes.end()) return std::nullopt;
  if (const auto* d = std::get_if<double>(&it->second)) return *d;
  return std::nullopt;
}

std::optional<std::string> Feature::text(const std::string& key) const {
  const auto it = attributes.find(key);
  if (it == attributes.end()) return std::nullopt;
  if (const auto* s = std::get_if<std::string>(&it->second)) return *s;
  return std::nullopt;
}

Feature make_feature(std::int64_t id, FeatureKind kind, Geometry geometry) {
  Feature f;
  f.id = id;
  f.kind = kind;
  f.kind_label = std::string(kind_name(kind));
  f.geometry = std::move(geometry);
  return f;
}

std::vector<const Feature*> FeatureCollection::of_kind(FeatureKind kind) const {
  std::vector<const Feature*> out;
  for (const auto& f : features_) {
    if (f.kind == kind) out.push_back(&f);
  }
  return out;
}

const Feature* FeatureCollection::find(std::int64_t id) const {
  for (const auto& f : features_) {
    if (f.id == id) return &f;
  }
  return nullptr;
}

std::int64_t FeatureCollection::max_id() const {
  std::int64_t m = 0;
  for (const auto& f : features_) m = std::max(m, f.id);
  return m;
}

}  // namespace terratwin::geo
