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

#ifndef TERRATWIN_PIPELINE_CATALOG_HPP_
#define TERRATWIN_PIPELINE_CATALOG_HPP_

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "terratwin/geomodel/country.hpp"
#include "terratwin/geomodel/feature_io.hpp"
#include "terratwin/pipeline/weather.hpp"

namespace terratwin::pipeline {

enum class Category { kLandCover, kLandform, kGeohazard, kProximity, kClimateWeather };

inline constexpr std::array<Category, 5> kAllCategories = {
    Category::kLandCover, Category::kLandform, Category::kGeohazard,
    Category::kProximity, Category::kClimateWeather};

std::string_view category_name(Category c);
std::optional<Category> parse_category(std::string_view name);

enum class DatasetKind { kRaster, kFeatures, kRoads, kEvents, kWeather };

struct DatasetSpec {
  std::string_view name;
  Category category;
  DatasetKind kind;
  std::vector<geo::FeatureKind> feature_kinds;  // kFeatures only
  std::string_view file_name() const;
};

// Every dataset a model directory may hold.
const std::vector<DatasetSpec>& dataset_registry();
// Throws NotFound for an unregistered name.
const DatasetSpec& dataset(std::string_view name);
// Dataset a feature kind is stored in; nullptr for kinds not stored.
const DatasetSpec* dataset_for_kind(geo::FeatureKind kind);

struct CatalogEntry {
  Category category;
  int version_year;
  std::string source;
  std::string path;  // relative to the model directory
  std::string checksum;
  std::string units;  // rasters only
  friend bool operator==(const CatalogEntry&, const CatalogEntry&) = default;
};

struct LayerCatalog {
  std::string version;
  std::string previous;  // empty for the first version
  std::map<std::string, CatalogEntry> entries;
  friend bool operator==(const LayerCatalog&, const LayerCatalog&) = default;
};

std::string format_catalog(const LayerCatalog& c);
LayerCatalog parse_catalog(std::string_view json_text);

struct StalenessReport {
  std::map<Category, std::vector<std::string>> stale;  // non-empty groups only
  bool empty() const { return stale.empty(); }
  std::vector<Category> categories() const;
};

// Entries whose version_year precedes current_year, grouped by category.
StalenessReport staleness_report(const LayerCatalog& catalog, int current_year);

struct DiffReport {
  std::string layer;
  std::optional<double> changed_fraction;  // rasters
  std::size_t added = 0;
  std::size_t removed = 0;
  std::size_t modified = 0;
  std::size_t rejected = 0;                // payload features outside the grid
  std::optional<std::size_t> new_events;   // geohazard events
  bool zero() const;
};

// Model directory layout:
//   model.json                 seed, grid and generator parameters
//   catalog/<version>/catalog.json
//   catalog/CURRENT            id of the current version
//   catalog/LOCK               present while an update runs
//   data/<version>/<dataset>   files written by that version
class ModelStore {
 public:
  explicit ModelStore(std::filesystem::path root);

  const std::filesystem::path& root() const { return root_; }
  std::string current_version() const;
  std::vector<std::string> versions() const;
  // Reads a version's catalog; with `verify`, every file checksum is
  // recomputed and a mismatch throws ParseError.
  LayerCatalog load_catalog(const std::string& version, bool verify = true) const;
  LayerCatalog load_current(bool verify = true) const;

 private:
  std::filesystem::path root_;
};

struct LoadedModel {
  geo::CountryModel model;
  LayerCatalog catalog;
  geo::LoadReport report;
  std::vector<Reading> weather;
};

// Writes a fresh model directory (version v0001). Throws InvalidArgument if
// the directory already holds a model.
LayerCatalog create_model_dir(const std::filesystem::path& root,
                              const geo::CountryModel& model);

// Loads the version CURRENT names at call time.
LoadedModel load_model(const std::filesystem::path& root);
LoadedModel load_model(const std::filesystem::path& root, const std::string& version);

struct UpdateResult {
  LayerCatalog catalog;
  std::vector<DiffReport> diffs;
  bool new_version = false;
};

// Ingests payload files (named after their dataset, e.g. amenities.json,
// elevation.asc, events.csv, weather.csv) for one category. Affected entries
// get version_year = `year`. Rasters and feature sets are replaced; events
// and weather readings are merged as sets. Nothing is written when a payload
// fails to parse or belongs to another category, or when nothing changed.
UpdateResult apply_update(const std::filesystem::path& root, Category category,
                          std::span<const std::filesystem::path> payload,
                          int year, const std::string& source = "payload");

std::string format_diffs(const std::vector<DiffReport>& diffs);
std::string format_staleness(const StalenessReport& r, int current_year);

}  // namespace terratwin::pipeline

#endif  // TERRATWIN_PIPELINE_CATALOG_HPP_
