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

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numbers>

#include "terratwin/common/checksum.hpp"
#include "terratwin/common/error.hpp"
#include "terratwin/common/rng.hpp"
#include "terratwin/geomodel/country.hpp"
#include "terratwin/geomodel/events.hpp"
#include "terratwin/geomodel/feature_io.hpp"
#include "terratwin/geomodel/raster_io.hpp"
#include "terratwin/geomodel/rasterize.hpp"
#include "terratwin/geomodel/terrain.hpp"
#include "terratwin/hazard/factors.hpp"
#include "terratwin/hazard/hazard.hpp"
#include "oracles.hpp"

using namespace terratwin;
using namespace terratwin::geo;

namespace {

GridSpec small_spec(int ncols, int nrows, double cellsize = 10.0) {
  return GridSpec{ncols, nrows, 1000.0, 2000.0, cellsize, -9999.0};
}

std::string error_of(auto&& fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    return e.what();
  }
  return "";
}

// Upper 1% points of the chi-square distribution, indexed by degrees of freedom.
constexpr double kChiSquare99[] = {0,      6.635,  9.210,  11.345, 13.277, 15.086,
                                   16.812, 18.475, 20.090, 21.666, 23.209, 24.725,
                                   26.217, 27.688, 29.141, 30.578};

std::vector<double> values_of(const RasterLayer& l) {
  return {l.values().begin(), l.values().end()};
}

}  // namespace

TEST_CASE("grid cell centres and lookup") {
  const auto s = small_spec(4, 3);
  CHECK_NOTHROW(s.validate());
  const Point c = s.center({0, 0});
  CHECK(c.x == 1005.0);
  CHECK(c.y == 2025.0);
  CHECK(s.center({2, 3}).x == 1035.0);
  CHECK(s.center({2, 3}).y == 2005.0);
  const auto cell = s.cell_of({1031.0, 2001.0});
  REQUIRE(cell.has_value());
  CHECK(cell->row == 2);
  CHECK(cell->col == 3);
  CHECK_FALSE(s.cell_of({999.0, 2001.0}).has_value());
  CHECK(s.unflat(s.flat({2, 1})).col == 1);
  CHECK_THROWS_AS(small_spec(0, 3).validate(), InvalidArgument);
  CHECK_THROWS_AS(small_spec(3, 3, 0.0).validate(), InvalidArgument);
}

TEST_CASE("raster write then read is identical") {
  const auto s = small_spec(2, 2);
  RasterLayer layer(s, std::vector<double>{1, 2, 3, 4}, "x");
  const auto back = parse_raster(format_raster(layer), "x");
  CHECK(values_of(back) == values_of(layer));
  CHECK(back.spec() == layer.spec());

  const auto dir = std::filesystem::temp_directory_path() / "terratwin_geomodel_io";
  std::filesystem::create_directories(dir);
  RasterLayer real(s, std::vector<double>{0.1, quantize_for_text(2.0 / 3.0), -9999.0, 1234.5}, "r");
  write_raster(real, dir / "r.asc");
  const auto again = read_raster(dir / "r.asc");
  CHECK(values_of(again) == values_of(real));
  CHECK(again.is_nodata({1, 0}));
  std::filesystem::remove_all(dir);
}

TEST_CASE("raster reals round-trip within documented precision") {
  Rng rng(5);
  const auto s = small_spec(7, 5);
  std::vector<double> v(s.cell_count());
  for (auto& x : v) x = rng.uniform(-500.0, 2500.0);
  const auto back = parse_raster(format_raster(RasterLayer(s, v, "a")));
  for (std::size_t i = 0; i < v.size(); ++i) {
    CHECK(std::abs(back.values()[i] - v[i]) <= 1e-6 * std::max(1.0, std::abs(v[i])));
  }
}

TEST_CASE("raster parse errors") {
  const std::string missing =
      "ncols 2\nnrows 2\nxllcorner 0\nyllcorner 0\nNODATA_value -9999\n1 2\n3 4\n";
  const auto msg = error_of([&] { parse_raster(missing); });
  CHECK(msg.find("cellsize") != std::string::npos);
  CHECK_THROWS_AS(parse_raster(missing), ParseError);

  const std::string short_data =
      "ncols 2\nnrows 2\nxllcorner 0\nyllcorner 0\ncellsize 1\nNODATA_value -9999\n1 2\n3\n";
  CHECK(error_of([&] { parse_raster(short_data); }).find("cell count mismatch") !=
        std::string::npos);

  const std::string bad_token =
      "ncols 2\nnrows 2\nxllcorner 0\nyllcorner 0\ncellsize 1\nNODATA_value -9999\n1 2\n3 x\n";
  try {
    parse_raster(bad_token);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 8);
  }
}

TEST_CASE("feature round-trip and load report") {
  FeatureCollection fc;
  Feature a;
  a.id = 7;
  a.kind = FeatureKind::kAmenityHospital;
  a.kind_label = "amenity_hospital";
  a.geometry = Point{1010.5, 2003.25};
  a.attributes["name"] = std::string("General");
  a.attributes["beds"] = 120.0;
  fc.add(a);
  const auto load = parse_features(format_features(fc));
  CHECK(load.report.clean());
  REQUIRE(load.features.all().size() == 1);
  CHECK(load.features.all()[0] == a);

  const std::string open_ring = R"({"features":[{"id":1,"kind":"building","geometry":
    {"type":"Polygon","coordinates":[[[0,0],[1,0],[1,1],[0,1]]]},"properties":{}}]})";
  CHECK(error_of([&] { parse_features(open_ring); }).find("ring not closed") !=
        std::string::npos);

  const std::string mixed = R"({"features":[
    {"id":1,"kind":"tree","geometry":{"type":"Point","coordinates":[1005,2005]},"properties":{"species":"olive"}},
    {"id":2,"kind":"tree","geometry":{"type":"Point","coordinates":[5000,2005]},"properties":{}},
    {"id":3,"kind":"windmill","geometry":{"type":"Point","coordinates":[1015,2015]},"properties":{}}]})";
  const auto r = parse_features(mixed, small_spec(4, 4));
  CHECK(r.features.all().size() == 2);
  REQUIRE(r.report.rejected.size() == 1);
  CHECK(r.report.rejected[0].id == 2);
  REQUIRE(r.report.unknown_kinds.size() == 1);
  CHECK(r.report.unknown_kinds[0].id == 3);
  const Feature* kept = r.features.find(3);
  REQUIRE(kept != nullptr);
  CHECK(kept->kind == FeatureKind::kUnknown);
  CHECK(kept->kind_label == "windmill");
  // Unknown kinds survive a rewrite verbatim.
  CHECK(format_features(r.features).find("\"windmill\"") != std::string::npos);
}

TEST_CASE("events csv round-trip") {
  const std::string text =
      "peril,x,y,date,severity\nflood,1000.5,2000.25,2020-03-04,3\nearthquake,1,2,2019-12-31,5\n";
  const auto events = parse_events_csv(text);
  REQUIRE(events.size() == 2);
  CHECK(events[0].peril == Peril::kFlood);
  CHECK(format_date(events[1].date) == "2019-12-31");
  CHECK(parse_events_csv(format_events_csv(events)) == events);
  CHECK_THROWS_AS(parse_events_csv("peril,x,y,date,severity\ntornado,1,2,2020-01-01,3\n"),
                  ParseError);
  CHECK_THROWS_AS(parse_events_csv("peril,x,y,date,severity\nflood,1,2,2020-01-01,6\n"),
                  ParseError);
  CHECK_THROWS_AS(parse_events_csv("peril,x,y,date,severity\nflood,1,2,2020-02-30,2\n"),
                  ParseError);
}

TEST_CASE("slope and aspect on analytic planes") {
  const auto s = small_spec(9, 7, 25.0);
  auto plane = [&](double gx, double gy) {
    RasterLayer z(s, "elevation", "m");
    for (int r = 0; r < s.nrows; ++r) {
      for (int c = 0; c < s.ncols; ++c) {
        const Point p = s.center({r, c});
        z.at(r, c) = gx * p.x + gy * p.y - 100.0;
      }
    }
    return derive_slope_aspect(z);
  };
  const auto interior = [&](auto&& fn) {
    for (int r = 1; r + 1 < s.nrows; ++r) {
      for (int c = 1; c + 1 < s.ncols; ++c) fn(r, c);
    }
  };
  const double deg = 180.0 / std::numbers::pi;

  auto flat = plane(0.0, 0.0);
  interior([&](int r, int c) {
    CHECK(flat.slope.at(r, c) == 0.0);
    CHECK(flat.aspect.is_nodata({r, c}));
  });
  CHECK(flat.slope.is_nodata({0, 0}));

  auto east = plane(0.1, 0.0);
  interior([&](int r, int c) {
    CHECK(std::abs(east.slope.at(r, c) - std::atan(0.1) * deg) < 1e-9);
    CHECK(std::abs(east.aspect.at(r, c) - 270.0) < 1e-9);
  });
  auto north = plane(0.0, 0.1);
  interior([&](int r, int c) { CHECK(std::abs(north.aspect.at(r, c) - 180.0) < 1e-9); });
  auto south = plane(0.0, -0.2);
  interior([&](int r, int c) {
    CHECK(std::abs(south.aspect.at(r, c) - 0.0) < 1e-9);
    CHECK(std::abs(south.slope.at(r, c) - std::atan(0.2) * deg) < 1e-9);
  });
  auto diag = plane(0.1, 0.1);
  interior([&](int r, int c) {
    CHECK(std::abs(diag.aspect.at(r, c) - 225.0) < 1e-9);
    CHECK(std::abs(diag.slope.at(r, c) - std::atan(std::sqrt(0.02)) * deg) < 1e-9);
  });

  CHECK_THROWS(derive_slope_aspect(RasterLayer(small_spec(2, 5), "z")));
}

TEST_CASE("polygon mask agrees with point-in-polygon at cell centres") {
  const auto s = small_spec(20, 16);
  Polygon poly{{{{1012, 2010}, {1150, 2030}, {1090, 2140}, {1030, 2100}, {1012, 2010}}}};
  const Polygon* list[] = {&poly};
  const auto mask = polygon_mask(s, list, "m");
  for (std::size_t k = 0; k < s.cell_count(); ++k) {
    const bool inside = oracle::point_in_polygon(poly, s.center(s.unflat(k)));
    CHECK((mask.values()[k] != 0.0) == inside);
  }
}

TEST_CASE("generator is deterministic and seed-sensitive") {
  const auto spec = default_grid(96, 100.0);
  GeneratorParams p;
  p.trees = 300;
  const auto a = generate_country(1, spec, p);
  const auto b = generate_country(1, spec, p);
  CHECK(a == b);
  CHECK(format_raster(a.layer("elevation")) == format_raster(b.layer("elevation")));
  CHECK(format_features(a.features) == format_features(b.features));
  CHECK(format_events_csv(a.events) == format_events_csv(b.events));
  const auto c = generate_country(2, spec, p);
  CHECK(sha256_hex(format_raster(a.layer("elevation"))) !=
        sha256_hex(format_raster(c.layer("elevation"))));

  for (const auto& [name, layer] : a.layers) {
    CHECK_MESSAGE(layer.spec() == spec, name);
    for (double v : layer.values()) CHECK((std::isfinite(v) || v == spec.nodata));
  }
  for (const auto& f : a.features.all()) {
    if (const auto* pt = std::get_if<Point>(&f.geometry)) CHECK(spec.contains(*pt));
  }
  for (const auto& e : a.events) {
    CHECK(e.severity >= 1);
    CHECK(e.severity <= 5);
  }
}

TEST_CASE("generator rejects invalid params by field name") {
  GeneratorParams p;
  p.event_sharpness = -1.0;
  CHECK(error_of([&] { generate_country(1, default_grid(32), p); }).find("event_sharpness") !=
        std::string::npos);
  GeneratorParams q;
  q.octaves = 0;
  CHECK(error_of([&] { generate_country(1, default_grid(32), q); }).find("octaves") !=
        std::string::npos);
}

TEST_CASE("events are uniform over eligible land when sharpness is zero") {
  const auto spec = default_grid(64, 100.0);
  GeneratorParams p;
  p.event_sharpness = 0.0;
  p.events_per_peril = 1600;
  p.trees = 100;
  const auto model = generate_country(11, spec, p);
  const auto factors = hazard::build_factor_layers(model);
  const auto& lc = model.layer("landcover");

  for (Peril peril : kAllPerils) {
    const auto s = hazard::susceptibility(factors, hazard::default_weights(peril));
    // Eligible cells per 16x16 super-cell and observed counts.
    double eligible[4][4] = {};
    double observed[4][4] = {};
    double total_eligible = 0.0;
    for (std::size_t k = 0; k < spec.cell_count(); ++k) {
      const auto c = spec.unflat(k);
      if (lc.at(c) == landcover_code::kWater || s.is_nodata({c.row, c.col})) continue;
      eligible[c.row / 16][c.col / 16] += 1.0;
      total_eligible += 1.0;
    }
    double n = 0.0;
    for (const auto& e : model.events) {
      if (e.peril != peril) continue;
      const auto c = spec.cell_of({e.x, e.y});
      REQUIRE(c.has_value());
      observed[c->row / 16][c->col / 16] += 1.0;
      n += 1.0;
    }
    double chi2 = 0.0;
    int bins = 0;
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        if (eligible[i][j] == 0.0) {
          CHECK(observed[i][j] == 0.0);
          continue;
        }
        const double expected = n * eligible[i][j] / total_eligible;
        chi2 += (observed[i][j] - expected) * (observed[i][j] - expected) / expected;
        ++bins;
      }
    }
    REQUIRE(bins >= 2);
    CHECK_MESSAGE(chi2 < kChiSquare99[bins - 1], peril_name(peril), " chi2=", chi2);
  }
}
