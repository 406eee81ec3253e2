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

#include "terratwin/geomodel/country.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "terratwin/common/error.hpp"
#include "terratwin/common/rng.hpp"
#include "terratwin/geomodel/raster_io.hpp"
#include "terratwin/geomodel/rasterize.hpp"
#include "terratwin/geomodel/terrain.hpp"
#include "terratwin/hazard/factors.hpp"
#include "terratwin/hazard/hazard.hpp"

namespace terratwin::geo {

void GeneratorParams::validate() const {
  auto fail = [](const char* field, const char* rule) {
    throw InvalidArgument(std::string("generator parameter '") + field +
                          "' " + rule);
  };
  if (octaves < 1 || octaves > 10) fail("octaves", "must be in 1..10");
  if (!(persistence > 0.0 && persistence <= 1.0))
    fail("persistence", "must be in (0,1]");
  if (!(base_wavelength_m > 0.0)) fail("base_wavelength_m", "must be > 0");
  if (!(max_elevation_m > 0.0)) fail("max_elevation_m", "must be > 0");
  if (!(relief_exponent > 0.0 && relief_exponent <= 8.0))
    fail("relief_exponent", "must be in (0,8]");
  if (!(sea_threshold >= 0.0 && sea_threshold < 1.0))
    fail("sea_threshold", "must be in [0,1)");
  if (settlements < 1) fail("settlements", "must be >= 1");
  if (shortcut_edges < 0) fail("shortcut_edges", "must be >= 0");
  if (!(road_node_spacing_m > 0.0)) fail("road_node_spacing_m", "must be > 0");
  if (amenities_per_settlement < 0)
    fail("amenities_per_settlement", "must be >= 0");
  if (pools_per_settlement < 0) fail("pools_per_settlement", "must be >= 0");
  if (buildings_per_settlement < 0)
    fail("buildings_per_settlement", "must be >= 0");
  if (beaches < 0) fail("beaches", "must be >= 0");
  if (protected_zones < 0) fail("protected_zones", "must be >= 0");
  if (trees < 0) fail("trees", "must be >= 0");
  if (events_per_peril < 0) fail("events_per_peril", "must be >= 0");
  if (!(event_sharpness >= 0.0) || !std::isfinite(event_sharpness))
    fail("event_sharpness", "must be a finite value >= 0");
  if (first_event_year < 1900 || first_event_year > 2200)
    fail("first_event_year", "must be in 1900..2200");
  if (event_years < 1 || event_years > 100)
    fail("event_years", "must be in 1..100");
  if (data_year < 1900 || data_year > 2200)
    fail("data_year", "must be in 1900..2200");
}

const RasterLayer& CountryModel::layer(const std::string& name) const {
  const auto it = layers.find(name);
  if (it == layers.end()) throw NotFound("missing layer '" + name + "'");
  return it->second;
}

void CountryModel::put_layer(RasterLayer layer) {
  require_aligned(spec, layer);
  const std::string name = layer.name();
  layers.insert_or_assign(name, std::move(layer));
}

GridSpec default_grid(int size, double cellsize) {
  GridSpec spec{size, size, 500000.0, 3800000.0, cellsize, kDefaultNodata};
  spec.validate();
  return spec;
}

namespace {

// Salts that keep each generator stage on an independent random stream.
enum Stream : std::uint64_t {
  kTerrain = 1,
  kMoisture,
  kRock,
  kSettlements,
  kRoads,
  kAmenities,
  kBeaches,
  kTrees,
  kBuildings,
  kProtected,
  kFaults,
  kEvents,
};

Rng stream(std::uint64_t seed, Stream s) { return Rng(mix64(seed ^ mix64(s))); }

double lattice(std::uint64_t salt, std::int64_t ix, std::int64_t iy) {
  const std::uint64_t h = mix64(
      salt + mix64(static_cast<std::uint64_t>(ix) + mix64(static_cast<std::uint64_t>(iy))));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

double smooth(double t) { return t * t * (3.0 - 2.0 * t); }

double value_noise(std::uint64_t salt, double u, double v) {
  const double fu = std::floor(u);
  const double fv = std::floor(v);
  const auto iu = static_cast<std::int64_t>(fu);
  const auto iv = static_cast<std::int64_t>(fv);
  const double su = smooth(u - fu);
  const double sv = smooth(v - fv);
  const double a = lattice(salt, iu, iv);
  const double b = lattice(salt, iu + 1, iv);
  const double c = lattice(salt, iu, iv + 1);
  const double d = lattice(salt, iu + 1, iv + 1);
  const double bottom = a + (b - a) * su;
  const double top = c + (d - c) * su;
  return bottom + (top - bottom) * sv;
}

// Fractal sum of value noise normalized to [0,1].
double fractal(std::uint64_t salt, double x, double y, int octaves,
               double persistence, double wavelength) {
  double sum = 0.0, norm = 0.0, amp = 1.0;
  for (int o = 0; o < octaves; ++o) {
    sum += amp * value_noise(mix64(salt + static_cast<std::uint64_t>(o)),
                             x / wavelength, y / wavelength);
    norm += amp;
    amp *= persistence;
    wavelength *= 0.5;
  }
  return sum / norm;
}

Polygon octagon(Point c, double r) {
  std::vector<Point> ring;
  for (int k = 0; k < 8; ++k) {
    const double a = (k + 0.5) * std::numbers::pi / 4.0;
    ring.push_back({c.x + r * std::cos(a), c.y + r * std::sin(a)});
  }
  ring.push_back(ring.front());
  return Polygon{{std::move(ring)}};
}

Polygon square(Point c, double half) {
  return Polygon{{{{c.x - half, c.y - half},
                   {c.x + half, c.y - half},
                   {c.x + half, c.y + half},
                   {c.x - half, c.y + half},
                   {c.x - half, c.y - half}}}};
}

struct Settlement {
  Point center;
  double radius;
  double population;
  Polygon region;
  proximity::NodeId hub = 0;
  std::vector<proximity::NodeId> local_nodes;
};

class RoadBuilder {
 public:
  proximity::NodeId add_node(Point p) {
    const proximity::NodeId id = static_cast<proximity::NodeId>(nodes_.size()) + 1;
    nodes_.push_back({id, p});
    return id;
  }
  const Point& pos(proximity::NodeId id) const { return nodes_[id - 1].pos; }

  void add_edge(proximity::NodeId a, proximity::NodeId b, proximity::RoadClass c,
                double winding = 1.0) {
    const Point pa = pos(a), pb = pos(b);
    const double len = std::hypot(pb.x - pa.x, pb.y - pa.y) * winding;
    if (len > 0.0) edges_.push_back({a, b, c, len});
  }

  // Straight road from a to b broken into pieces no longer than `spacing`.
  std::vector<proximity::NodeId> add_road(proximity::NodeId a,
                                          proximity::NodeId b,
                                          proximity::RoadClass c,
                                          double spacing) {
    const Point pa = pos(a), pb = pos(b);
    const double len = std::hypot(pb.x - pa.x, pb.y - pa.y);
    const int pieces = std::max(1, static_cast<int>(std::ceil(len / spacing)));
    std::vector<proximity::NodeId> chain{a};
    for (int i = 1; i < pieces; ++i) {
      const double t = static_cast<double>(i) / pieces;
      chain.push_back(add_node({pa.x + t * (pb.x - pa.x), pa.y + t * (pb.y - pa.y)}));
    }
    chain.push_back(b);
    for (std::size_t i = 0; i + 1 < chain.size(); ++i) add_edge(chain[i], chain[i + 1], c);
    return chain;
  }

  std::size_t node_count() const { return nodes_.size(); }

  proximity::RoadNetwork build() && {
    return proximity::RoadNetwork(std::move(nodes_), std::move(edges_));
  }

 private:
  std::vector<proximity::RoadNode> nodes_;
  std::vector<proximity::RoadEdge> edges_;
};

class Generator {
 public:
  Generator(std::uint64_t seed, const GridSpec& spec, const GeneratorParams& p)
      : seed_(seed), spec_(spec), p_(p) {}

  CountryModel run() {
    model_.spec = spec_;
    model_.seed = seed_;
    model_.params = p_;
    terrain();
    settlements();
    landcover();
    roads();
    amenities();
    beaches();
    trees();
    buildings_and_pools();
    protected_zones();
    grid_lines();
    faults();
    events();
    return std::move(model_);
  }

 private:
  double width() const { return spec_.ncols * spec_.cellsize; }
  double height() const { return spec_.nrows * spec_.cellsize; }

  RasterLayer blank(const char* name, const char* units) const {
    return RasterLayer(spec_, name, units);
  }

  void store(RasterLayer layer) {
    for (double& v : layer.mutable_values()) {
      if (v != spec_.nodata) v = quantize_for_text(v);
    }
    model_.put_layer(std::move(layer));
  }

  bool is_sea(std::size_t k) const { return sea_[k] != 0; }

  bool inside_extent(Point p, double margin) const {
    return p.x >= spec_.xll + margin && p.x <= spec_.xmax() - margin &&
           p.y >= spec_.yll + margin && p.y <= spec_.ymax() - margin;
  }

  bool land_at(Point p) const {
    const auto c = spec_.cell_of(p);
    return c && !is_sea(spec_.flat(*c));
  }

  Point random_point(Rng& rng, double margin) const {
    return {rng.uniform(spec_.xll + margin, spec_.xmax() - margin),
            rng.uniform(spec_.yll + margin, spec_.ymax() - margin)};
  }

  std::int64_t next_id() { return ++last_id_; }

  void terrain() {
    const std::size_t n = spec_.cell_count();
    std::vector<double> h(n);
    const double cx = spec_.xll + 0.5 * width();
    const double cy = spec_.yll + 0.5 * height();
    const std::uint64_t salt = mix64(seed_ ^ mix64(kTerrain));
    double hmax = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const Point c = spec_.center(spec_.unflat(k));
      const double dx = (c.x - cx) / (0.5 * width());
      const double dy = (c.y - cy) / (0.5 * height());
      // Island falloff: full height in the middle, sea towards the frame.
      const double falloff = std::clamp(1.35 - 1.1 * (dx * dx + dy * dy), 0.0, 1.0);
      h[k] = fractal(salt, c.x, c.y, p_.octaves, p_.persistence,
                     p_.base_wavelength_m) * falloff;
      hmax = std::max(hmax, h[k]);
    }
    sea_.assign(n, 0);
    RasterLayer elevation = blank("elevation", "m");
    auto ev = elevation.mutable_values();
    const double top = std::max(hmax, p_.sea_threshold + 1e-9);
    for (std::size_t k = 0; k < n; ++k) {
      if (h[k] < p_.sea_threshold) {
        sea_[k] = 1;
        ev[k] = 0.0;
      } else {
        ev[k] = std::pow((h[k] - p_.sea_threshold) / (top - p_.sea_threshold),
                         p_.relief_exponent) *
                p_.max_elevation_m;
      }
    }
    store(std::move(elevation));
    const RasterLayer& elev = model_.layer("elevation");

    auto sa = derive_slope_aspect(elev);
    store(std::move(sa.slope));
    store(std::move(sa.aspect));
    const auto slope = model_.layer("slope").values();
    const auto aspect = model_.layer("aspect").values();

    const std::uint64_t moist_salt = mix64(seed_ ^ mix64(kMoisture));
    const std::uint64_t rock_salt = mix64(seed_ ^ mix64(kRock));
    moisture_.resize(n);
    RasterLayer geology = blank("geology", "code");
    RasterLayer precipitation = blank("precipitation", "mm/yr");
    RasterLayer dryness = blank("summer_dryness", "1");
    RasterLayer insolation = blank("insolation", "kWh/m2/day");
    for (std::size_t k = 0; k < n; ++k) {
      const Point c = spec_.center(spec_.unflat(k));
      const double e = elev.values()[k] / p_.max_elevation_m;
      const double m = fractal(moist_salt, c.x, c.y, 3, 0.5, 6400.0);
      const double r = fractal(rock_salt, c.x, c.y, 3, 0.5, 4800.0);
      moisture_[k] = m;
      const double s = slope[k] == spec_.nodata ? 0.0 : slope[k];

      int rock;
      if (is_sea(k)) {
        rock = 5;
      } else if (e > 0.6) {
        rock = r > 0.6 ? 3 : 4;
      } else if (e > 0.25) {
        rock = r > 0.45 ? 3 : 2;
      } else if (s < 3.0) {
        rock = 5;
      } else {
        rock = r > 0.6 ? 3 : 1;
      }
      geology.mutable_values()[k] = rock;
      precipitation.mutable_values()[k] = 320.0 + 680.0 * e + 120.0 * (m - 0.5);
      dryness.mutable_values()[k] =
          std::clamp(0.9 - 0.55 * e - 0.2 * (m - 0.5), 0.0, 1.0);

      if (slope[k] == spec_.nodata) {
        insolation.mutable_values()[k] = spec_.nodata;
      } else {
        const double tilt = s * std::numbers::pi / 180.0;
        const double facing =
            aspect[k] == spec_.nodata
                ? 0.0
                : std::cos((aspect[k] - 180.0) * std::numbers::pi / 180.0);
        insolation.mutable_values()[k] = 5.4 * (1.0 + 0.3 * std::sin(tilt) * facing);
      }
    }
    store(std::move(geology));
    store(std::move(precipitation));
    store(std::move(dryness));
    store(std::move(insolation));
  }

  void settlements() {
    Rng rng = stream(seed_, kSettlements);
    const double extent = std::min(width(), height());
    const double elev_cap = 0.55 * p_.max_elevation_m;
    const auto elev = model_.layer("elevation").values();
    double separation = 2.0 * 900.0 + 600.0;
    int failures = 0;
    for (int attempt = 0; attempt < 40000 &&
                          static_cast<int>(towns_.size()) < p_.settlements;
         ++attempt) {
      const double r = std::min(rng.uniform(400.0, 900.0), 0.15 * extent);
      const Point c = random_point(rng, r + spec_.cellsize);
      const auto cell = spec_.cell_of(c);
      bool ok = cell.has_value();
      if (ok && attempt < 30000) {
        const std::size_t k = spec_.flat(*cell);
        ok = !is_sea(k) && elev[k] <= elev_cap;
      }
      for (const auto& t : towns_) {
        if (!ok) break;
        ok = std::hypot(t.center.x - c.x, t.center.y - c.y) >= separation;
      }
      if (!ok) {
        if (++failures % 2000 == 0) separation *= 0.8;
        continue;
      }
      Settlement s;
      s.center = c;
      s.radius = r;
      s.population = static_cast<double>(500 + rng.below(19501));
      s.region = octagon(c, r);
      towns_.push_back(std::move(s));
    }
    for (std::size_t i = 0; i < towns_.size(); ++i) {
      Feature f = make_feature(next_id(), FeatureKind::kRegion, towns_[i].region);
      f.attributes["name"] = "settlement_" + std::to_string(i + 1);
      f.attributes["population"] = towns_[i].population;
      model_.features.add(std::move(f));
    }
  }

  void landcover() {
    namespace lc = landcover_code;
    const std::size_t n = spec_.cell_count();
    const auto elev = model_.layer("elevation").values();
    const auto slope = model_.layer("slope").values();
    RasterLayer cover = blank("landcover", "code");
    RasterLayer species = blank("species", "code");
    for (std::size_t k = 0; k < n; ++k) {
      const Point c = spec_.center(spec_.unflat(k));
      const double e = elev[k] / p_.max_elevation_m;
      const double s = slope[k] == spec_.nodata ? 0.0 : slope[k];
      const double m = moisture_[k];
      int code;
      if (is_sea(k)) {
        code = lc::kWater;
      } else if (std::any_of(towns_.begin(), towns_.end(), [&](const Settlement& t) {
                   return contains(t.region, c);
                 })) {
        code = lc::kBuilt;
      } else if (s >= 30.0 || e > 0.88) {
        code = lc::kBare;
      } else if ((e > 0.45 && m > 0.4) || m > 0.68) {
        code = lc::kForest;
      } else if (e < 0.3 && s < 10.0) {
        code = lc::kCropland;
      } else {
        code = lc::kShrub;
      }
      cover.mutable_values()[k] = code;
      int sp = 0;
      if (code == lc::kForest) {
        sp = e > 0.55 ? 2 : 1;
      } else if (code == lc::kCropland && m > 0.5) {
        sp = 3;
      }
      species.mutable_values()[k] = sp;
    }
    store(std::move(cover));
    store(std::move(species));
  }

  void roads() {
    using proximity::RoadClass;
    Rng rng = stream(seed_, kRoads);
    const double spacing = p_.road_node_spacing_m;
    for (auto& t : towns_) t.hub = roads_.add_node(t.center);

    // Random spanning tree: towns join in shuffled order, each linking to
    // the nearest town already connected.
    std::vector<std::size_t> order(towns_.size());
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[rng.below(i)]);
    }
    std::vector<double> pops;
    for (const auto& t : towns_) pops.push_back(t.population);
    std::sort(pops.begin(), pops.end());
    const double median = pops[pops.size() / 2];
    std::vector<std::pair<std::size_t, std::size_t>> linked;
    for (std::size_t i = 1; i < order.size(); ++i) {
      const auto& t = towns_[order[i]];
      std::size_t best = order[0];
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < i; ++j) {
        const auto& u = towns_[order[j]];
        const double d = std::hypot(u.center.x - t.center.x, u.center.y - t.center.y);
        if (d < best_d) {
          best_d = d;
          best = order[j];
        }
      }
      const bool major = t.population >= median && towns_[best].population >= median;
      roads_.add_road(t.hub, towns_[best].hub,
                      major ? RoadClass::kHighway : RoadClass::kPrimary, spacing);
      linked.emplace_back(std::min(order[i], best), std::max(order[i], best));
    }
    for (int s = 0; s < p_.shortcut_edges && towns_.size() > 2; ++s) {
      for (int tries = 0; tries < 50; ++tries) {
        std::size_t a = rng.below(towns_.size());
        std::size_t b = rng.below(towns_.size());
        if (a == b) continue;
        if (a > b) std::swap(a, b);
        if (std::find(linked.begin(), linked.end(), std::pair{a, b}) != linked.end())
          continue;
        roads_.add_road(towns_[a].hub, towns_[b].hub, RoadClass::kSecondary, spacing);
        linked.emplace_back(a, b);
        break;
      }
    }

    // Street grid inside each town, anchored on the hub.
    const double step = 0.5 * spacing;
    for (auto& t : towns_) {
      const int k = std::max(1, static_cast<int>(0.7 * t.radius / step));
      std::vector<proximity::NodeId> ids((2 * k + 1) * (2 * k + 1));
      auto at = [&](int i, int j) -> proximity::NodeId& {
        return ids[(i + k) * (2 * k + 1) + (j + k)];
      };
      for (int i = -k; i <= k; ++i) {
        for (int j = -k; j <= k; ++j) {
          at(i, j) = (i == 0 && j == 0)
                         ? t.hub
                         : roads_.add_node({t.center.x + j * step, t.center.y + i * step});
          t.local_nodes.push_back(at(i, j));
        }
      }
      for (int i = -k; i <= k; ++i) {
        for (int j = -k; j <= k; ++j) {
          if (j < k) roads_.add_edge(at(i, j), at(i, j + 1), RoadClass::kSecondary);
          if (i < k) roads_.add_edge(at(i, j), at(i + 1, j), RoadClass::kSecondary);
        }
      }
    }

    // Dirt spurs into the countryside.
    const std::size_t built_nodes = roads_.node_count();
    for (std::size_t s = 0; s < 2 * towns_.size(); ++s) {
      proximity::NodeId from =
          static_cast<proximity::NodeId>(rng.below(built_nodes)) + 1;
      const double angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
      const double length = rng.uniform(800.0, 2500.0);
      const int pieces = std::max(1, static_cast<int>(std::ceil(length / spacing)));
      const double seg = length / pieces;
      for (int i = 0; i < pieces; ++i) {
        const Point a = roads_.pos(from);
        const Point b{a.x + seg * std::cos(angle), a.y + seg * std::sin(angle)};
        if (!inside_extent(b, spec_.cellsize) || !land_at(b)) break;
        const proximity::NodeId to = roads_.add_node(b);
        roads_.add_edge(from, to, RoadClass::kDirt, 1.2);
        from = to;
      }
    }
    model_.roads = std::move(roads_).build();
  }

  void amenities() {
    static constexpr FeatureKind kOrder[] = {
        FeatureKind::kAmenitySupermarket, FeatureKind::kAmenityPharmacy,
        FeatureKind::kAmenitySchool, FeatureKind::kAmenityHospital};
    Rng rng = stream(seed_, kAmenities);
    for (const auto& t : towns_) {
      for (int j = 0; j < p_.amenities_per_settlement; ++j) {
        const auto node = t.local_nodes[rng.below(t.local_nodes.size())];
        const Point base = model_.roads.node_at(model_.roads.require_index(node)).pos;
        Point p{base.x + rng.uniform(-40.0, 40.0), base.y + rng.uniform(-40.0, 40.0)};
        if (!inside_extent(p, 0.0)) p = base;
        model_.features.add(make_feature(next_id(), kOrder[j % 4], p));
      }
    }
  }

  void beaches() {
    Rng rng = stream(seed_, kBeaches);
    std::vector<std::size_t> coast;
    for (int row = 0; row < spec_.nrows; ++row) {
      for (int col = 0; col < spec_.ncols; ++col) {
        const std::size_t k = spec_.flat({row, col});
        if (is_sea(k)) continue;
        static constexpr int kD[4][2] = {{-1, 0}, {1, 0}, {0, -1}, {0, 1}};
        for (const auto& d : kD) {
          const int r = row + d[0], c = col + d[1];
          if (spec_.in_bounds(r, c) && is_sea(spec_.flat({r, c}))) {
            coast.push_back(k);
            break;
          }
        }
      }
    }
    const std::size_t count = std::min<std::size_t>(coast.size(), p_.beaches);
    for (std::size_t i = 0; i < count; ++i) {
      std::swap(coast[i], coast[i + rng.below(coast.size() - i)]);
      const Point c = spec_.center(spec_.unflat(coast[i]));
      Feature f = make_feature(
          next_id(), i % 3 == 0 ? FeatureKind::kBlueFlagBeach : FeatureKind::kBeach, c);
      f.attributes["name"] = "beach_" + std::to_string(i + 1);
      model_.features.add(std::move(f));
    }
  }

  void trees() {
    namespace lc = landcover_code;
    Rng rng = stream(seed_, kTrees);
    const auto cover = model_.layer("landcover").values();
    const auto species = model_.layer("species").values();
    std::vector<std::size_t> eligible;
    for (std::size_t k = 0; k < cover.size(); ++k) {
      const int c = static_cast<int>(cover[k]);
      if (c == lc::kForest || c == lc::kShrub || c == lc::kCropland) {
        eligible.push_back(k);
      }
    }
    if (eligible.empty()) return;
    const double cs = spec_.cellsize;
    for (int i = 0; i < p_.trees; ++i) {
      const std::size_t k = eligible[rng.below(eligible.size())];
      const Point c = spec_.center(spec_.unflat(k));
      const Point p{c.x + rng.uniform(-0.45, 0.45) * cs,
                    c.y + rng.uniform(-0.45, 0.45) * cs};
      int code = static_cast<int>(species[k]);
      if (code == 0) code = rng.uniform() < 0.5 ? 4 : 3;
      Feature f = make_feature(next_id(), FeatureKind::kTree, p);
      f.attributes["species"] = std::string(species_name(code));
      f.attributes["volume_m3"] = std::round(rng.uniform(0.2, 3.0) * 1000.0) / 1000.0;
      model_.features.add(std::move(f));
    }
  }

  void buildings_and_pools() {
    Rng rng = stream(seed_, kBuildings);
    for (const auto& t : towns_) {
      auto inside = [&](Point p) { return contains(t.region, p); };
      auto sample = [&]() {
        for (;;) {
          const Point p{t.center.x + rng.uniform(-t.radius, t.radius),
                        t.center.y + rng.uniform(-t.radius, t.radius)};
          if (inside(p)) return p;
        }
      };
      for (int i = 0; i < p_.buildings_per_settlement; ++i) {
        const double half = std::round(rng.uniform(4.0, 10.0) * 2.0) / 2.0;
        Point c = sample();
        Polygon sq = square(c, half);
        if (!std::all_of(sq.rings[0].begin(), sq.rings[0].end(), inside)) {
          sq = square(t.center, half);
        }
        Feature f = make_feature(next_id(), FeatureKind::kBuilding, sq);
        f.attributes["floors"] = static_cast<double>(1 + rng.below(4));
        model_.features.add(std::move(f));
      }
      for (int i = 0; i < p_.pools_per_settlement; ++i) {
        Feature f = make_feature(next_id(), FeatureKind::kSwimmingPool, sample());
        f.attributes["volume_m3"] = static_cast<double>(20 + rng.below(101));
        model_.features.add(std::move(f));
      }
    }
  }

  void protected_zones() {
    namespace lc = landcover_code;
    Rng rng = stream(seed_, kProtected);
    const auto cover = model_.layer("landcover").values();
    std::vector<std::size_t> forest;
    for (std::size_t k = 0; k < cover.size(); ++k) {
      if (static_cast<int>(cover[k]) == lc::kForest) forest.push_back(k);
    }
    const double limit = 0.3 * std::min(width(), height());
    for (int i = 0; i < p_.protected_zones; ++i) {
      const double r = std::min(rng.uniform(1000.0, 2500.0), limit);
      Point c = forest.empty() ? random_point(rng, r + 1.0)
                               : spec_.center(spec_.unflat(forest[rng.below(forest.size())]));
      c.x = std::clamp(c.x, spec_.xll + r + 1.0, spec_.xmax() - r - 1.0);
      c.y = std::clamp(c.y, spec_.yll + r + 1.0, spec_.ymax() - r - 1.0);
      Feature f = make_feature(next_id(), FeatureKind::kProtectedZone, octagon(c, r));
      f.attributes["name"] = "reserve_" + std::to_string(i + 1);
      model_.features.add(std::move(f));
    }
    store(feature_mask(spec_, model_.features, FeatureKind::kProtectedZone,
                       "protected_mask"));
  }

  void grid_lines() {
    std::vector<Point> centers;
    for (const auto& t : towns_) centers.push_back(t.center);
    std::sort(centers.begin(), centers.end(),
              [](Point a, Point b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
    if (centers.size() == 1) {
      const Point a = centers[0];
      centers.push_back({std::clamp(a.x + 2000.0, spec_.xll, spec_.xmax()), a.y});
    }
    auto clamp_in = [&](Point p) {
      return Point{std::clamp(p.x, spec_.xll, spec_.xmax()),
                   std::clamp(p.y, spec_.yll, spec_.ymax())};
    };
    for (std::size_t i = 0; i + 1 < centers.size(); ++i) {
      const Point a = centers[i], b = centers[i + 1];
      const double len = std::hypot(b.x - a.x, b.y - a.y);
      if (len == 0.0) continue;
      // Offset the midpoint so power lines do not sit on the roads.
      const Point mid = clamp_in({0.5 * (a.x + b.x) - 150.0 * (b.y - a.y) / len,
                                  0.5 * (a.y + b.y) + 150.0 * (b.x - a.x) / len});
      Feature f = make_feature(next_id(), FeatureKind::kGridLine, LineString{{a, mid, b}});
      f.attributes["voltage_kv"] = 132.0;
      model_.features.add(std::move(f));
    }
  }

  void faults() {
    Rng rng = stream(seed_, kFaults);
    std::vector<std::pair<Point, Point>> lines;
    for (int i = 0; i < 2; ++i) {
      lines.emplace_back(random_point(rng, 0.0), random_point(rng, 0.0));
    }
    RasterLayer prox = blank("fault_proximity", "1");
    for (std::size_t k = 0; k < spec_.cell_count(); ++k) {
      const Point c = spec_.center(spec_.unflat(k));
      double d2 = std::numeric_limits<double>::infinity();
      for (const auto& [a, b] : lines) d2 = std::min(d2, segment_distance_sq(c, a, b));
      prox.mutable_values()[k] = std::exp(-std::sqrt(d2) / 3000.0);
    }
    store(std::move(prox));
  }

  void events() {
    using namespace std::chrono;
    Rng rng = stream(seed_, kEvents);
    const auto factors = hazard::build_factor_layers(model_);
    const sys_days first{year{p_.first_event_year} / January / 1};
    const sys_days last{year{p_.first_event_year + p_.event_years - 1} / December / 31};
    const auto span_days = static_cast<std::uint64_t>((last - first).count() + 1);
    const double cs = spec_.cellsize;
    for (Peril peril : kAllPerils) {
      const auto s = hazard::susceptibility(factors, hazard::default_weights(peril));
      const auto sv = s.values();
      std::vector<std::size_t> cells;
      std::vector<double> cumulative;
      double total = 0.0;
      for (std::size_t k = 0; k < sv.size(); ++k) {
        if (is_sea(k) || sv[k] == spec_.nodata) continue;
        total += std::pow(sv[k], p_.event_sharpness);
        cells.push_back(k);
        cumulative.push_back(total);
      }
      if (cells.empty() || !(total > 0.0)) continue;
      for (int i = 0; i < p_.events_per_peril; ++i) {
        const double u = rng.uniform() * total;
        const auto pos = std::upper_bound(cumulative.begin(), cumulative.end(), u) -
                         cumulative.begin();
        const std::size_t k = cells[std::min<std::size_t>(pos, cells.size() - 1)];
        const Point c = spec_.center(spec_.unflat(k));
        HazardEvent e;
        e.peril = peril;
        e.x = quantize_for_text(c.x + rng.uniform(-0.45, 0.45) * cs);
        e.y = quantize_for_text(c.y + rng.uniform(-0.45, 0.45) * cs);
        e.date = year_month_day{first + days{static_cast<int>(rng.below(span_days))}};
        const double sev = 1.0 + 5.0 * sv[k] * rng.uniform(0.6, 1.0);
        e.severity = std::clamp(static_cast<int>(sev), 1, 5);
        model_.events.push_back(e);
      }
    }
    std::stable_sort(model_.events.begin(), model_.events.end(),
                     [](const HazardEvent& a, const HazardEvent& b) {
                       return sys_days{a.date} < sys_days{b.date};
                     });
  }

  std::uint64_t seed_;
  GridSpec spec_;
  GeneratorParams p_;
  CountryModel model_;
  std::vector<unsigned char> sea_;
  std::vector<double> moisture_;
  std::vector<Settlement> towns_;
  RoadBuilder roads_;
  std::int64_t last_id_ = 0;
};

}  // namespace

CountryModel generate_country(std::uint64_t seed, const GridSpec& spec,
                              const GeneratorParams& params) {
  spec.validate();
  params.validate();
  if (spec.ncols < 3 || spec.nrows < 3) {
    throw InvalidArgument("generator grid must be at least 3x3");
  }
  return Generator(seed, spec, params).run();
}

}  // namespace terratwin::geo
