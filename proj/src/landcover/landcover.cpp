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

#include "terratwin/landcover/landcover.hpp"

#include <cmath>
#include <limits>

#include <json.hpp>

#include "terratwin/common/error.hpp"
#include "terratwin/geomodel/country.hpp"

namespace terratwin::landcover {

namespace {

const geo::Polygon& region_polygon(const geo::Feature& region) {
  const auto* poly = std::get_if<geo::Polygon>(&region.geometry);
  if (poly == nullptr) {
    throw InvalidArgument("region " + std::to_string(region.id) +
                          " is not a polygon");
  }
  if (poly->rings.empty() || !(geo::area(*poly) > 0.0)) {
    throw InvalidArgument("region " + std::to_string(region.id) +
                          " is a degenerate polygon");
  }
  return *poly;
}

struct Fractions {
  double veg = 0.0;
  double built = 0.0;
};

Fractions cover_fractions(const geo::Polygon& poly, const RasterLayer& cover) {
  const geo::GridSpec& spec = cover.spec();
  const geo::Box box = geo::bounding_box(poly);
  // Only rows/columns whose centers can fall inside the bounding box.
  const int c0 = std::max(0, static_cast<int>(std::floor((box.xmin - spec.xll) / spec.cellsize)));
  const int c1 = std::min(spec.ncols - 1, static_cast<int>(std::floor((box.xmax - spec.xll) / spec.cellsize)));
  const int r0 = std::max(0, static_cast<int>(std::floor((spec.ymax() - box.ymax) / spec.cellsize)));
  const int r1 = std::min(spec.nrows - 1, static_cast<int>(std::floor((spec.ymax() - box.ymin) / spec.cellsize)));
  std::size_t inside = 0, veg = 0, built = 0;
  for (int row = r0; row <= r1; ++row) {
    for (int col = c0; col <= c1; ++col) {
      if (!geo::contains(poly, spec.center({row, col}))) continue;
      ++inside;
      const double v = cover.at(row, col);
      if (v == spec.nodata) continue;
      const int code = static_cast<int>(v);
      veg += is_vegetation(code) ? 1 : 0;
      built += is_built(code) ? 1 : 0;
    }
  }
  Fractions f;
  if (inside > 0) {
    f.veg = static_cast<double>(veg) / static_cast<double>(inside);
    f.built = static_cast<double>(built) / static_cast<double>(inside);
  }
  return f;
}

// 1-D squared distance transform of f (lower envelope of parabolas).
void edt_1d(const double* f, std::size_t n, std::size_t stride, double* out,
            std::vector<int>& v, std::vector<double>& z,
            std::vector<double>& scratch) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  scratch.resize(n);
  for (std::size_t i = 0; i < n; ++i) scratch[i] = f[i * stride];
  v.assign(n, 0);
  z.assign(n + 1, 0.0);
  int k = -1;
  for (int q = 0; q < static_cast<int>(n); ++q) {
    if (scratch[q] == kInf) continue;
    if (k < 0) {
      k = 0;
      v[0] = q;
      z[0] = -kInf;
      z[1] = kInf;
      continue;
    }
    double s;
    for (;;) {
      const int p = v[k];
      s = ((scratch[q] + double(q) * q) - (scratch[p] + double(p) * p)) /
          (2.0 * q - 2.0 * p);
      if (s <= z[k]) {
        if (--k < 0) break;
      } else {
        break;
      }
    }
    ++k;
    v[k] = q;
    z[k] = k == 0 ? -kInf : s;
    z[k + 1] = kInf;
  }
  for (std::size_t q = 0; q < n; ++q) {
    if (k < 0) {
      out[q * stride] = kInf;
      continue;
    }
    int j = 0;
    while (z[j + 1] < static_cast<double>(q)) ++j;
    const double d = static_cast<double>(q) - v[j];
    out[q * stride] = d * d + scratch[v[j]];
  }
}

}  // namespace

bool is_vegetation(int code) {
  namespace lc = geo::landcover_code;
  return code == lc::kForest || code == lc::kShrub || code == lc::kCropland;
}

bool is_built(int code) { return code == geo::landcover_code::kBuilt; }

ZonalReport zonal_report(const geo::Feature& region,
                         const geo::FeatureCollection& features,
                         const RasterLayer& landcover) {
  const geo::Polygon& poly = region_polygon(region);
  ZonalReport r;
  r.region_id = region.id;
  const geo::Box box = geo::bounding_box(poly);
  auto in_region = [&](geo::Point p) {
    return p.x >= box.xmin && p.x <= box.xmax && p.y >= box.ymin &&
           p.y <= box.ymax && geo::contains(poly, p);
  };
  for (const auto& f : features.all()) {
    if (f.id == region.id) continue;
    geo::Point anchor;
    double footprint = 0.0;
    if (const auto* p = std::get_if<geo::Point>(&f.geometry)) {
      anchor = *p;
    } else if (const auto* g = std::get_if<geo::Polygon>(&f.geometry)) {
      anchor = geo::centroid(*g);
      footprint = geo::area(*g);
    } else {
      continue;
    }
    if (!in_region(anchor)) continue;
    ++r.counts[f.kind_label];
    switch (f.kind) {
      case geo::FeatureKind::kTree:
        if (auto sp = f.text("species")) ++r.species_counts[*sp];
        break;
      case geo::FeatureKind::kSwimmingPool:
        r.pool_volume_m3 += f.number("volume_m3").value_or(0.0);
        break;
      case geo::FeatureKind::kBuilding:
        r.building_area_m2 += footprint;
        break;
      default:
        break;
    }
  }
  const Fractions fr = cover_fractions(poly, landcover);
  r.veg_fraction = fr.veg;
  r.built_fraction = fr.built;
  return r;
}

EpochStack::EpochStack(std::vector<Epoch> epochs) : epochs_(std::move(epochs)) {
  for (std::size_t i = 0; i < epochs_.size(); ++i) {
    const auto& e = epochs_[i];
    const geo::GridSpec& spec = epochs_.front().species.spec();
    if (!(e.species.spec() == spec) || !(e.landcover.spec() == spec)) {
      throw InvalidArgument("epoch " + std::to_string(e.year) +
                            " rasters are not aligned");
    }
    if (i > 0 && e.year <= epochs_[i - 1].year) {
      throw InvalidArgument("epoch years must strictly increase");
    }
  }
}

std::vector<ChangePoint> change_series(const geo::Feature& region,
                                       const EpochStack& epochs) {
  if (epochs.size() < 2) throw InvalidArgument("change series needs >= 2 epochs");
  const geo::Polygon& poly = region_polygon(region);
  std::vector<ChangePoint> out;
  for (const auto& e : epochs.epochs()) {
    const Fractions f = cover_fractions(poly, e.landcover);
    out.push_back({e.year, f.veg, f.built});
  }
  return out;
}

std::vector<double> squared_distance_transform(const std::vector<bool>& marked,
                                               int nrows, int ncols) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  const auto rows = static_cast<std::size_t>(nrows);
  const auto cols = static_cast<std::size_t>(ncols);
  std::vector<double> grid(rows * cols);
  for (std::size_t k = 0; k < grid.size(); ++k) grid[k] = marked[k] ? 0.0 : kInf;
  std::vector<double> tmp(grid.size());
  std::vector<int> v;
  std::vector<double> z, scratch;
  for (std::size_t c = 0; c < cols; ++c) {
    edt_1d(grid.data() + c, rows, cols, tmp.data() + c, v, z, scratch);
  }
  for (std::size_t r = 0; r < rows; ++r) {
    edt_1d(tmp.data() + r * cols, cols, 1, grid.data() + r * cols, v, z, scratch);
  }
  return grid;
}

double spread_velocity(const RasterLayer& epoch_a, const RasterLayer& epoch_b,
                       int species, double years) {
  if (!(years > 0.0)) throw InvalidArgument("years must be > 0");
  geo::require_aligned(epoch_a.spec(), epoch_b);
  const geo::GridSpec& spec = epoch_a.spec();
  const auto a = epoch_a.values();
  const auto b = epoch_b.values();
  const auto code = static_cast<double>(species);
  std::vector<bool> source(a.size());
  bool any = false;
  for (std::size_t k = 0; k < a.size(); ++k) {
    source[k] = a[k] == code;
    any = any || source[k];
  }
  if (!any) throw DomainError("no source population");
  std::vector<double> d2;
  double total = 0.0;
  std::size_t fresh = 0;
  for (std::size_t k = 0; k < b.size(); ++k) {
    if (b[k] != code || source[k]) continue;
    if (d2.empty()) d2 = squared_distance_transform(source, spec.nrows, spec.ncols);
    total += std::sqrt(d2[k]) * spec.cellsize;
    ++fresh;
  }
  if (fresh == 0) return 0.0;
  return total / static_cast<double>(fresh) / years;
}

double spread_velocity(const RasterLayer& epoch_a, const RasterLayer& epoch_b,
                       std::string_view species, double years) {
  const auto code = geo::species_code(species);
  if (!code) throw InvalidArgument("unknown species '" + std::string(species) + "'");
  return spread_velocity(epoch_a, epoch_b, *code, years);
}

std::string format_zonal_report(const ZonalReport& r) {
  nlohmann::json j{{"region_id", r.region_id},
                   {"counts", r.counts},
                   {"species_counts", r.species_counts},
                   {"pool_volume_m3", r.pool_volume_m3},
                   {"building_area_m2", r.building_area_m2},
                   {"veg_fraction", r.veg_fraction},
                   {"built_fraction", r.built_fraction}};
  return j.dump(2) + "\n";
}

ZonalReport parse_zonal_report(std::string_view json_text) {
  try {
    const auto j = nlohmann::json::parse(json_text);
    ZonalReport r;
    r.region_id = j.at("region_id").get<std::int64_t>();
    r.counts = j.at("counts").get<std::map<std::string, std::int64_t>>();
    r.species_counts =
        j.at("species_counts").get<std::map<std::string, std::int64_t>>();
    r.pool_volume_m3 = j.at("pool_volume_m3").get<double>();
    r.building_area_m2 = j.at("building_area_m2").get<double>();
    r.veg_fraction = j.at("veg_fraction").get<double>();
    r.built_fraction = j.at("built_fraction").get<double>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed zonal report: ") + e.what());
  }
}

}  // namespace terratwin::landcover
