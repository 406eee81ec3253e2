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

#include "terratwin/pipeline/catalog.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cstdio>
#include <set>
#include <tuple>

#include <json.hpp>

#include "terratwin/common/checksum.hpp"
#include "terratwin/common/error.hpp"
#include "terratwin/geomodel/raster_io.hpp"
#include "terratwin/geomodel/rasterize.hpp"

namespace terratwin::pipeline {

namespace fs = std::filesystem;
using nlohmann::json;
using geo::FeatureKind;

namespace {

constexpr std::string_view kCategoryNames[] = {
    "land_cover", "landform", "geohazard", "proximity", "climate_weather"};

std::string version_id(int n) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "v%04d", n);
  return buf;
}

int version_number(const std::string& v) {
  if (v.size() < 2 || v[0] != 'v') throw ParseError("bad catalog version '" + v + "'");
  try {
    return std::stoi(v.substr(1));
  } catch (const std::exception&) {
    throw ParseError("bad catalog version '" + v + "'");
  }
}

// Holds catalog/LOCK for the lifetime of one update.
class WriterLock {
 public:
  explicit WriterLock(fs::path path) : path_(std::move(path)) {
    fd_ = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
    if (fd_ < 0) {
      throw DomainError("catalog is locked by another update (" + path_.string() + ")");
    }
  }
  ~WriterLock() {
    ::close(fd_);
    std::error_code ec;
    fs::remove(path_, ec);
  }
  WriterLock(const WriterLock&) = delete;
  WriterLock& operator=(const WriterLock&) = delete;

 private:
  fs::path path_;
  int fd_;
};

json spec_to_json(const geo::GridSpec& s) {
  return {{"ncols", s.ncols}, {"nrows", s.nrows}, {"xll", s.xll},
          {"yll", s.yll},     {"cellsize", s.cellsize}, {"nodata", s.nodata}};
}

geo::GridSpec spec_from_json(const json& j) {
  geo::GridSpec s;
  s.ncols = j.at("ncols").get<int>();
  s.nrows = j.at("nrows").get<int>();
  s.xll = j.at("xll").get<double>();
  s.yll = j.at("yll").get<double>();
  s.cellsize = j.at("cellsize").get<double>();
  s.nodata = j.at("nodata").get<double>();
  s.validate();
  return s;
}

#define TT_PARAM_FIELDS(X)                                                     \
  X(octaves) X(persistence) X(base_wavelength_m) X(max_elevation_m)            \
  X(relief_exponent) X(sea_threshold) X(settlements) X(shortcut_edges)         \
  X(road_node_spacing_m) X(amenities_per_settlement) X(pools_per_settlement)   \
  X(buildings_per_settlement) X(beaches) X(protected_zones) X(trees)           \
  X(events_per_peril) X(event_sharpness) X(first_event_year) X(event_years)    \
  X(data_year)

json params_to_json(const geo::GeneratorParams& p) {
  json j = json::object();
#define X(f) j[#f] = p.f;
  TT_PARAM_FIELDS(X)
#undef X
  return j;
}

geo::GeneratorParams params_from_json(const json& j) {
  geo::GeneratorParams p;
#define X(f) p.f = j.at(#f).get<decltype(p.f)>();
  TT_PARAM_FIELDS(X)
#undef X
  return p;
}
#undef TT_PARAM_FIELDS

struct ModelMeta {
  std::uint64_t seed;
  geo::GridSpec spec;
  geo::GeneratorParams params;
};

ModelMeta read_meta(const fs::path& root) {
  const fs::path path = root / "model.json";
  if (!fs::exists(path)) throw NotFound("no model at " + root.string());
  try {
    const json j = json::parse(read_file(path));
    return {j.at("seed").get<std::uint64_t>(), spec_from_json(j.at("grid")),
            params_from_json(j.at("params"))};
  } catch (const json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

// Features of one dataset, in id order.
geo::FeatureCollection select_features(const geo::FeatureCollection& all,
                                       const DatasetSpec& ds) {
  geo::FeatureCollection out;
  for (const auto& f : all.all()) {
    if (std::find(ds.feature_kinds.begin(), ds.feature_kinds.end(), f.kind) !=
        ds.feature_kinds.end()) {
      out.add(f);
    }
  }
  return out;
}

std::string serialize(const DatasetSpec& ds, const geo::CountryModel& m,
                      const std::vector<Reading>& weather) {
  switch (ds.kind) {
    case DatasetKind::kRaster:
      return geo::format_raster(m.layer(std::string(ds.name)));
    case DatasetKind::kFeatures:
      return geo::format_features(select_features(m.features, ds));
    case DatasetKind::kRoads:
      return proximity::format_road_network(m.roads);
    case DatasetKind::kEvents:
      return geo::format_events_csv(m.events);
    case DatasetKind::kWeather:
      return format_weather_csv(weather);
  }
  return {};
}

// Working copy of every dataset while assembling or updating a model.
struct Contents {
  std::map<std::string, geo::RasterLayer> rasters;
  std::map<std::string, geo::FeatureCollection> features;
  std::optional<proximity::RoadNetwork> roads;
  std::vector<geo::HazardEvent> events;
  std::vector<Reading> weather;
  bool has_events = false;
  bool has_weather = false;
  geo::LoadReport report;
};

void append_report(geo::LoadReport& into, const geo::LoadReport& from) {
  into.unknown_kinds.insert(into.unknown_kinds.end(), from.unknown_kinds.begin(),
                            from.unknown_kinds.end());
  into.rejected.insert(into.rejected.end(), from.rejected.begin(), from.rejected.end());
}

void parse_into(Contents& c, const DatasetSpec& ds, std::string_view text,
                const geo::GridSpec& spec, const std::string& units) {
  const std::string name(ds.name);
  switch (ds.kind) {
    case DatasetKind::kRaster: {
      geo::RasterLayer r = geo::parse_raster(text, name);
      if (!(r.spec() == spec)) {
        throw InvalidArgument("raster '" + name + "' is not aligned with the model grid");
      }
      std::vector<double> values(r.values().begin(), r.values().end());
      c.rasters[name] = geo::RasterLayer(spec, std::move(values), name, units);
      break;
    }
    case DatasetKind::kFeatures: {
      geo::FeatureLoad load = geo::parse_features(text, spec);
      for (const auto& f : load.features.all()) {
        if (f.kind != FeatureKind::kUnknown &&
            std::find(ds.feature_kinds.begin(), ds.feature_kinds.end(), f.kind) ==
                ds.feature_kinds.end()) {
          throw InvalidArgument("feature " + std::to_string(f.id) + " of kind '" +
                                f.kind_label + "' does not belong to dataset '" +
                                name + "'");
        }
      }
      append_report(c.report, load.report);
      c.features[name] = std::move(load.features);
      break;
    }
    case DatasetKind::kRoads:
      c.roads = proximity::parse_road_network(text);
      break;
    case DatasetKind::kEvents:
      c.events = geo::parse_events_csv(text);
      c.has_events = true;
      break;
    case DatasetKind::kWeather:
      c.weather = parse_weather_csv(text);
      c.has_weather = true;
      break;
  }
}

Contents read_contents(const fs::path& root, const LayerCatalog& catalog,
                       const geo::GridSpec& spec) {
  Contents c;
  for (const auto& [name, entry] : catalog.entries) {
    const DatasetSpec& ds = dataset(name);
    const fs::path path = root / entry.path;
    try {
      parse_into(c, ds, read_file(path), spec, entry.units);
    } catch (const ParseError& e) {
      throw ParseError(path.string() + ": " + e.what());
    }
  }
  return c;
}

geo::CountryModel assemble(const ModelMeta& meta, Contents& c) {
  geo::CountryModel m;
  m.spec = meta.spec;
  m.seed = meta.seed;
  m.params = meta.params;
  std::vector<geo::Feature> features;
  std::set<std::int64_t> ids;
  for (auto& [name, fc] : c.features) {
    for (auto& f : fc.mutable_all()) {
      if (!ids.insert(f.id).second) {
        throw ParseError("feature id " + std::to_string(f.id) + " repeats across datasets");
      }
      features.push_back(f);
    }
  }
  std::sort(features.begin(), features.end(),
            [](const geo::Feature& a, const geo::Feature& b) { return a.id < b.id; });
  m.features = geo::FeatureCollection(std::move(features));
  for (auto& [name, r] : c.rasters) m.put_layer(r);
  m.put_layer(geo::feature_mask(m.spec, m.features, FeatureKind::kProtectedZone,
                                "protected_mask"));
  if (c.roads) m.roads = *c.roads;
  m.events = c.events;
  return m;
}

std::string entry_file(const std::string& version, const DatasetSpec& ds) {
  return "data/" + version + "/" + std::string(ds.file_name());
}

void write_catalog_files(const fs::path& root, const LayerCatalog& cat) {
  const fs::path dir = root / "catalog" / cat.version;
  fs::create_directories(dir);
  write_file_atomic(dir / "catalog.json", format_catalog(cat));
  write_file_atomic(root / "catalog" / "CURRENT", cat.version + "\n");
}

// Diffs by feature id.
DiffReport diff_features(const std::string& name, const geo::FeatureCollection& before,
                         const geo::FeatureCollection& after, std::size_t rejected) {
  DiffReport d;
  d.layer = name;
  d.rejected = rejected;
  std::map<std::int64_t, const geo::Feature*> old;
  for (const auto& f : before.all()) old[f.id] = &f;
  std::set<std::int64_t> seen;
  for (const auto& f : after.all()) {
    seen.insert(f.id);
    auto it = old.find(f.id);
    if (it == old.end()) {
      ++d.added;
    } else if (!(*it->second == f)) {
      ++d.modified;
    }
  }
  for (const auto& [id, f] : old) {
    if (!seen.count(id)) ++d.removed;
  }
  return d;
}

DiffReport diff_rasters(const std::string& name, const geo::RasterLayer& before,
                        const geo::RasterLayer& after) {
  DiffReport d;
  d.layer = name;
  const auto a = before.values();
  const auto b = after.values();
  std::size_t changed = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) ++changed;
  }
  d.modified = changed;
  d.changed_fraction = a.empty() ? 0.0 : static_cast<double>(changed) / a.size();
  return d;
}

using EdgeKey = std::tuple<proximity::NodeId, proximity::NodeId, int, double>;

std::set<EdgeKey> edge_keys(const proximity::RoadNetwork& net) {
  std::set<EdgeKey> keys;
  for (const auto& e : net.edges()) {
    keys.emplace(std::min(e.a, e.b), std::max(e.a, e.b), static_cast<int>(e.road_class),
                 e.length);
  }
  return keys;
}

DiffReport diff_roads(const proximity::RoadNetwork& before,
                      const proximity::RoadNetwork& after) {
  DiffReport d;
  d.layer = "roads";
  const auto a = edge_keys(before);
  const auto b = edge_keys(after);
  for (const auto& k : b) d.added += a.count(k) == 0;
  for (const auto& k : a) d.removed += b.count(k) == 0;
  std::map<proximity::NodeId, geo::Point> pos;
  for (const auto& n : before.nodes()) pos[n.id] = n.pos;
  for (const auto& n : after.nodes()) {
    auto it = pos.find(n.id);
    if (it != pos.end() && !(it->second == n.pos)) ++d.modified;
  }
  return d;
}

}  // namespace

std::string_view category_name(Category c) {
  return kCategoryNames[static_cast<int>(c)];
}

std::optional<Category> parse_category(std::string_view name) {
  for (Category c : kAllCategories) {
    if (category_name(c) == name) return c;
  }
  return std::nullopt;
}

std::string_view DatasetSpec::file_name() const {
  static const std::map<std::string_view, std::string> names = [] {
    std::map<std::string_view, std::string> m;
    for (const auto& ds : dataset_registry()) {
      std::string ext;
      switch (ds.kind) {
        case DatasetKind::kRaster: ext = ".asc"; break;
        case DatasetKind::kFeatures:
        case DatasetKind::kRoads: ext = ".json"; break;
        case DatasetKind::kEvents:
        case DatasetKind::kWeather: ext = ".csv"; break;
      }
      m[ds.name] = std::string(ds.name) + ext;
    }
    return m;
  }();
  return names.at(name);
}

const std::vector<DatasetSpec>& dataset_registry() {
  using C = Category;
  using K = DatasetKind;
  static const std::vector<DatasetSpec> registry = {
      {"landcover", C::kLandCover, K::kRaster, {}},
      {"species", C::kLandCover, K::kRaster, {}},
      {"trees", C::kLandCover, K::kFeatures, {FeatureKind::kTree}},
      {"swimming_pools", C::kLandCover, K::kFeatures, {FeatureKind::kSwimmingPool}},
      {"buildings", C::kLandCover, K::kFeatures, {FeatureKind::kBuilding}},
      {"regions", C::kLandCover, K::kFeatures, {FeatureKind::kRegion}},
      {"protected_zones", C::kLandCover, K::kFeatures, {FeatureKind::kProtectedZone}},
      {"elevation", C::kLandform, K::kRaster, {}},
      {"slope", C::kLandform, K::kRaster, {}},
      {"aspect", C::kLandform, K::kRaster, {}},
      {"geology", C::kLandform, K::kRaster, {}},
      {"events", C::kGeohazard, K::kEvents, {}},
      {"fault_proximity", C::kGeohazard, K::kRaster, {}},
      {"amenities", C::kProximity, K::kFeatures,
       {FeatureKind::kAmenitySupermarket, FeatureKind::kAmenityHospital,
        FeatureKind::kAmenityPharmacy, FeatureKind::kAmenitySchool}},
      {"beaches", C::kProximity, K::kFeatures,
       {FeatureKind::kBeach, FeatureKind::kBlueFlagBeach}},
      {"grid_lines", C::kProximity, K::kFeatures, {FeatureKind::kGridLine}},
      {"roads", C::kProximity, K::kRoads, {}},
      {"precipitation", C::kClimateWeather, K::kRaster, {}},
      {"summer_dryness", C::kClimateWeather, K::kRaster, {}},
      {"insolation", C::kClimateWeather, K::kRaster, {}},
      {"weather", C::kClimateWeather, K::kWeather, {}},
  };
  return registry;
}

const DatasetSpec& dataset(std::string_view name) {
  for (const auto& ds : dataset_registry()) {
    if (ds.name == name) return ds;
  }
  throw NotFound("unknown dataset '" + std::string(name) + "'");
}

const DatasetSpec* dataset_for_kind(FeatureKind kind) {
  for (const auto& ds : dataset_registry()) {
    if (std::find(ds.feature_kinds.begin(), ds.feature_kinds.end(), kind) !=
        ds.feature_kinds.end()) {
      return &ds;
    }
  }
  return nullptr;
}

std::string format_catalog(const LayerCatalog& c) {
  json entries = json::object();
  for (const auto& [name, e] : c.entries) {
    json j = {{"category", category_name(e.category)},
              {"version_year", e.version_year},
              {"source", e.source},
              {"path", e.path},
              {"checksum", e.checksum}};
    if (!e.units.empty()) j["units"] = e.units;
    entries[name] = std::move(j);
  }
  json out = {{"version", c.version}, {"previous", c.previous}, {"entries", entries}};
  return out.dump(2) + "\n";
}

LayerCatalog parse_catalog(std::string_view json_text) {
  LayerCatalog c;
  try {
    const json j = json::parse(json_text);
    c.version = j.at("version").get<std::string>();
    version_number(c.version);
    c.previous = j.value("previous", std::string());
    for (const auto& [name, e] : j.at("entries").items()) {
      const DatasetSpec& ds = dataset(name);
      const auto cat = parse_category(e.at("category").get<std::string>());
      if (!cat) throw ParseError("entry '" + name + "' has an unknown category");
      if (*cat != ds.category) {
        throw ParseError("entry '" + name + "' filed under the wrong category");
      }
      CatalogEntry entry;
      entry.category = *cat;
      entry.version_year = e.at("version_year").get<int>();
      entry.source = e.at("source").get<std::string>();
      entry.path = e.at("path").get<std::string>();
      entry.checksum = e.at("checksum").get<std::string>();
      entry.units = e.value("units", std::string());
      c.entries[name] = std::move(entry);
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("catalog: ") + e.what());
  } catch (const NotFound& e) {
    throw ParseError(std::string("catalog: ") + e.what());
  }
  return c;
}

std::vector<Category> StalenessReport::categories() const {
  std::vector<Category> out;
  for (const auto& [c, names] : stale) out.push_back(c);
  return out;
}

StalenessReport staleness_report(const LayerCatalog& catalog, int current_year) {
  StalenessReport r;
  for (const auto& [name, e] : catalog.entries) {
    if (e.version_year < current_year) r.stale[e.category].push_back(name);
  }
  return r;
}

bool DiffReport::zero() const {
  return added == 0 && removed == 0 && modified == 0 &&
         (!new_events || *new_events == 0);
}

ModelStore::ModelStore(fs::path root) : root_(std::move(root)) {}

std::string ModelStore::current_version() const {
  const fs::path path = root_ / "catalog" / "CURRENT";
  if (!fs::exists(path)) throw NotFound("no catalog at " + root_.string());
  std::string v = read_file(path);
  while (!v.empty() && (v.back() == '\n' || v.back() == '\r' || v.back() == ' ')) {
    v.pop_back();
  }
  version_number(v);
  return v;
}

std::vector<std::string> ModelStore::versions() const {
  std::vector<std::string> out;
  const fs::path dir = root_ / "catalog";
  if (!fs::exists(dir)) return out;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_directory() && fs::exists(e.path() / "catalog.json")) {
      out.push_back(e.path().filename().string());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

LayerCatalog ModelStore::load_catalog(const std::string& version, bool verify) const {
  const fs::path path = root_ / "catalog" / version / "catalog.json";
  if (!fs::exists(path)) throw NotFound("no catalog version '" + version + "'");
  LayerCatalog c = parse_catalog(read_file(path));
  if (verify) {
    for (const auto& [name, e] : c.entries) {
      const fs::path file = root_ / e.path;
      if (!fs::exists(file)) throw ParseError("missing file for '" + name + "': " + e.path);
      if (sha256_file(file) != e.checksum) {
        throw ParseError("checksum mismatch for '" + name + "': " + e.path);
      }
    }
  }
  return c;
}

LayerCatalog ModelStore::load_current(bool verify) const {
  return load_catalog(current_version(), verify);
}

LayerCatalog create_model_dir(const fs::path& root, const geo::CountryModel& model) {
  if (fs::exists(root / "model.json") || fs::exists(root / "catalog")) {
    throw InvalidArgument("directory already holds a model: " + root.string());
  }
  fs::create_directories(root / "catalog");
  json meta = {{"seed", model.seed},
               {"grid", spec_to_json(model.spec)},
               {"params", params_to_json(model.params)}};
  write_file_atomic(root / "model.json", meta.dump(2) + "\n");

  LayerCatalog cat;
  cat.version = version_id(1);
  for (const auto& ds : dataset_registry()) {
    if (ds.kind == DatasetKind::kWeather) continue;  // added by the first payload
    if (ds.kind == DatasetKind::kRaster && !model.has_layer(std::string(ds.name))) continue;
    const std::string rel = entry_file(cat.version, ds);
    const std::string bytes = serialize(ds, model, {});
    fs::create_directories((root / rel).parent_path());
    write_file_atomic(root / rel, bytes);
    CatalogEntry e{ds.category, model.params.data_year, "generator seed " +
                   std::to_string(model.seed), rel, sha256_hex(bytes), ""};
    if (ds.kind == DatasetKind::kRaster) e.units = model.layer(std::string(ds.name)).units();
    cat.entries[std::string(ds.name)] = std::move(e);
  }
  write_catalog_files(root, cat);
  return cat;
}

LoadedModel load_model(const fs::path& root) {
  return load_model(root, ModelStore(root).current_version());
}

LoadedModel load_model(const fs::path& root, const std::string& version) {
  const ModelMeta meta = read_meta(root);
  LoadedModel out;
  out.catalog = ModelStore(root).load_catalog(version, true);
  Contents c = read_contents(root, out.catalog, meta.spec);
  out.model = assemble(meta, c);
  out.report = std::move(c.report);
  out.weather = std::move(c.weather);
  return out;
}

UpdateResult apply_update(const fs::path& root, Category category,
                          std::span<const fs::path> payload, int year,
                          const std::string& source) {
  if (payload.empty()) throw InvalidArgument("empty payload");
  const ModelMeta meta = read_meta(root);
  ModelStore store(root);
  WriterLock lock(root / "catalog" / "LOCK");
  const LayerCatalog prior = store.load_current(true);
  Contents before = read_contents(root, prior, meta.spec);

  // Parse everything before touching the store.
  Contents incoming;
  std::vector<const DatasetSpec*> touched;
  std::map<std::string, std::size_t> rejected;
  for (const auto& p : payload) {
    const std::string stem = p.stem().string();
    const DatasetSpec* ds = nullptr;
    for (const auto& d : dataset_registry()) {
      if (d.name == stem) ds = &d;
    }
    if (!ds) throw InvalidArgument("payload '" + p.filename().string() + "' names no dataset");
    if (ds->category != category) {
      throw InvalidArgument("payload '" + p.filename().string() + "' belongs to " +
                            std::string(category_name(ds->category)) + ", not " +
                            std::string(category_name(category)));
    }
    if (std::find(touched.begin(), touched.end(), ds) != touched.end()) {
      throw InvalidArgument("dataset '" + stem + "' given twice");
    }
    const std::string units = prior.entries.count(stem) ? prior.entries.at(stem).units : "";
    const std::size_t before_rejected = incoming.report.rejected.size();
    try {
      parse_into(incoming, *ds, read_file(p), meta.spec, units);
    } catch (const ParseError& e) {
      throw ParseError(p.string() + ": " + e.what());
    }
    rejected[stem] = incoming.report.rejected.size() - before_rejected;
    touched.push_back(ds);
  }

  // Merge and diff.
  Contents after = before;
  std::vector<DiffReport> diffs;
  for (const DatasetSpec* ds : touched) {
    const std::string name(ds->name);
    switch (ds->kind) {
      case DatasetKind::kRaster: {
        const auto& next = incoming.rasters.at(name);
        auto it = before.rasters.find(name);
        if (it == before.rasters.end()) {
          DiffReport d;
          d.layer = name;
          d.changed_fraction = 1.0;
          d.added = next.values().size();
          diffs.push_back(d);
        } else {
          diffs.push_back(diff_rasters(name, it->second, next));
        }
        after.rasters[name] = next;
        break;
      }
      case DatasetKind::kFeatures: {
        const auto& next = incoming.features.at(name);
        std::set<std::int64_t> other_ids;
        for (const auto& [other, fc] : before.features) {
          if (other == name) continue;
          for (const auto& f : fc.all()) other_ids.insert(f.id);
        }
        for (const auto& f : next.all()) {
          if (other_ids.count(f.id)) {
            throw InvalidArgument("feature id " + std::to_string(f.id) +
                                  " is already used by another dataset");
          }
        }
        static const geo::FeatureCollection kEmpty;
        auto it = before.features.find(name);
        diffs.push_back(diff_features(name, it == before.features.end() ? kEmpty : it->second,
                                      next, rejected[name]));
        after.features[name] = next;
        break;
      }
      case DatasetKind::kRoads: {
        diffs.push_back(diff_roads(before.roads.value_or(proximity::RoadNetwork{}),
                                   *incoming.roads));
        after.roads = incoming.roads;
        break;
      }
      case DatasetKind::kEvents: {
        DiffReport d;
        d.layer = name;
        std::size_t fresh = 0;
        for (const auto& e : incoming.events) {
          if (std::find(after.events.begin(), after.events.end(), e) == after.events.end()) {
            after.events.push_back(e);
            ++fresh;
          }
        }
        std::stable_sort(after.events.begin(), after.events.end(),
                         [](const geo::HazardEvent& a, const geo::HazardEvent& b) {
                           return a.date < b.date;
                         });
        d.added = fresh;
        d.new_events = fresh;
        diffs.push_back(d);
        break;
      }
      case DatasetKind::kWeather: {
        DiffReport d;
        d.layer = name;
        std::map<std::pair<std::string, Minute>, const Reading*> known;
        for (const auto& r : after.weather) known[{r.station, r.time}] = &r;
        std::vector<Reading> fresh;
        for (const auto& r : incoming.weather) {
          auto [it, inserted] = known.emplace(std::make_pair(r.station, r.time), &r);
          if (inserted) {
            fresh.push_back(r);
          } else if (!(*it->second == r)) {
            throw InvalidArgument("conflicting reading for station '" + r.station +
                                  "' at " + format_timestamp(r.time));
          }
        }
        after.weather.insert(after.weather.end(), fresh.begin(), fresh.end());
        std::stable_sort(after.weather.begin(), after.weather.end(),
                         [](const Reading& a, const Reading& b) {
                           return std::tie(a.station, a.time) < std::tie(b.station, b.time);
                         });
        d.added = fresh.size();
        diffs.push_back(d);
        break;
      }
    }
  }

  bool changed = false;
  for (std::size_t i = 0; i < touched.size(); ++i) {
    const std::string name(touched[i]->name);
    auto it = prior.entries.find(name);
    if (!diffs[i].zero() || it == prior.entries.end() || it->second.version_year != year) {
      changed = true;
    }
  }
  UpdateResult result;
  result.diffs = diffs;
  if (!changed) {
    result.catalog = prior;
    return result;
  }

  // The next version also has to be checked against the other datasets.
  geo::CountryModel next_model = assemble(meta, after);

  LayerCatalog next = prior;
  next.previous = prior.version;
  next.version = version_id(version_number(prior.version) + 1);
  for (std::size_t i = 0; i < touched.size(); ++i) {
    const DatasetSpec& ds = *touched[i];
    const std::string name(ds.name);
    CatalogEntry e;
    auto it = prior.entries.find(name);
    if (it != prior.entries.end()) e = it->second;
    e.category = ds.category;
    e.version_year = year;
    e.source = source;
    if (it == prior.entries.end() || !diffs[i].zero()) {
      const std::string rel = entry_file(next.version, ds);
      const std::string bytes = serialize(ds, next_model, after.weather);
      fs::create_directories((root / rel).parent_path());
      write_file_atomic(root / rel, bytes);
      e.path = rel;
      e.checksum = sha256_hex(bytes);
      if (ds.kind == DatasetKind::kRaster) e.units = next_model.layer(name).units();
    }
    next.entries[name] = std::move(e);
  }
  write_catalog_files(root, next);
  result.catalog = std::move(next);
  result.new_version = true;
  return result;
}

std::string format_diffs(const std::vector<DiffReport>& diffs) {
  json arr = json::array();
  for (const auto& d : diffs) {
    json j = {{"layer", d.layer}, {"added", d.added}, {"removed", d.removed},
              {"modified", d.modified}};
    if (d.changed_fraction) j["changed_fraction"] = *d.changed_fraction;
    if (d.rejected) j["rejected"] = d.rejected;
    if (d.new_events) j["new_events"] = *d.new_events;
    arr.push_back(std::move(j));
  }
  return arr.dump(2) + "\n";
}

std::string format_staleness(const StalenessReport& r, int current_year) {
  json stale = json::object();
  for (const auto& [c, names] : r.stale) stale[std::string(category_name(c))] = names;
  json out = {{"year", current_year}, {"stale", stale}};
  return out.dump(2) + "\n";
}

}  // namespace terratwin::pipeline
