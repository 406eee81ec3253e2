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

#include <algorithm>
#include <cmath>
#include <numeric>

#include "terratwin/common/error.hpp"
#include "terratwin/common/rng.hpp"
#include "terratwin/geomodel/country.hpp"
#include "terratwin/hazard/factors.hpp"
#include "terratwin/hazard/hazard.hpp"
#include "oracles.hpp"

using namespace terratwin;
using namespace terratwin::hazard;
using geo::GridSpec;
using geo::HazardEvent;

namespace {

const GridSpec kSpec{32, 32, 0.0, 0.0, 100.0, -9999.0};

RasterLayer random_factor(Rng& rng, const std::string& name, double nodata_rate = 0.0) {
  RasterLayer l(kSpec, name, "1");
  for (auto& v : l.mutable_values()) {
    v = rng.uniform() < nodata_rate ? kSpec.nodata : rng.uniform();
  }
  return l;
}

RasterLayer constant(const GridSpec& spec, double v, const std::string& name) {
  return RasterLayer(spec, name, "1", v);
}

HazardEvent event_at(geo::Peril p, double x, double y, int year = 2020) {
  HazardEvent e;
  e.peril = p;
  e.x = x;
  e.y = y;
  e.date = std::chrono::year{year} / 6 / 1;
  e.severity = 3;
  return e;
}

}  // namespace

TEST_CASE("classify thresholds and labels") {
  CHECK(classify_value(0.0) == 1);
  CHECK(classify_value(1.0) == 5);
  CHECK(classify_value(0.2) == 2);
  CHECK(classify_value(0.39) == 2);
  CHECK(classify_value(0.4) == 3);
  for (int i = 0; i <= 100; ++i) {
    CHECK_MESSAGE(classify_value(i / 100.0) == oracle::class_for_percent(i), "percent ", i);
  }
  RasterLayer r(GridSpec{3, 1, 0, 0, 1, -9999.0}, std::vector<double>{0.05, -9999.0, 0.85}, "r");
  const auto c = classify(r);
  CHECK(c.values()[0] == 1.0);
  CHECK(c.values()[1] == -9999.0);
  CHECK(c.values()[2] == 5.0);
  CHECK(class_label(1) != class_label(5));
  CHECK_THROWS_AS(HazardClass(0), InvalidArgument);
  CHECK_THROWS_AS(HazardClass(6), InvalidArgument);
}

TEST_CASE("classify is monotone") {
  Rng rng(3);
  for (int i = 0; i < 5000; ++i) {
    double a = rng.uniform();
    double b = rng.uniform();
    if (a > b) std::swap(a, b);
    CHECK(classify_value(a) <= classify_value(b));
  }
}

TEST_CASE("susceptibility examples") {
  Rng rng(1);
  const auto f = random_factor(rng, "fuel", 0.1);
  const auto id = susceptibility(std::vector<RasterLayer>{f}, FactorWeights({{"fuel", 1.0}}));
  for (std::size_t k = 0; k < kSpec.cell_count(); ++k) CHECK(id.values()[k] == f.values()[k]);

  const std::vector<RasterLayer> two{constant(kSpec, 0.2, "a"), constant(kSpec, 0.8, "b")};
  const auto half = susceptibility(two, FactorWeights({{"a", 0.5}, {"b", 0.5}}));
  CHECK(half.values()[17] == doctest::Approx(0.5).epsilon(1e-15));

  CHECK_THROWS_AS(susceptibility(two, FactorWeights({{"a", 0.5}, {"c", 0.5}})), InvalidArgument);
  CHECK_THROWS_AS(FactorWeights({{"a", 0.5}, {"b", 0.6}}), InvalidArgument);
  CHECK_THROWS_AS(FactorWeights({{"a", -0.5}, {"b", 1.5}}), InvalidArgument);
}

TEST_CASE("susceptibility equals per-cell weighted sum and ignores layer order") {
  Rng rng(12);
  std::vector<RasterLayer> stack;
  const char* names[] = {"f0", "f1", "f2", "f3", "f4"};
  for (const char* n : names) stack.push_back(random_factor(rng, n, 0.05));
  std::map<std::string, double> raw;
  double total = 0.0;
  for (const char* n : names) total += (raw[n] = rng.uniform(0.1, 1.0));
  // Renormalize so the last weight absorbs rounding.
  double acc = 0.0;
  for (auto it = raw.begin(); it != raw.end(); ++it) {
    if (std::next(it) == raw.end()) {
      it->second = 1.0 - acc;
    } else {
      it->second /= total;
      acc += it->second;
    }
  }
  const FactorWeights w(raw);
  const auto s = susceptibility(stack, w);
  for (std::size_t k = 0; k < kSpec.cell_count(); ++k) {
    double sum = 0.0;
    bool nodata = false;
    for (const auto& [name, weight] : raw) {
      const auto& layer = *std::find_if(stack.begin(), stack.end(),
                                        [&](const RasterLayer& l) { return l.name() == name; });
      const double v = layer.values()[k];
      if (v == kSpec.nodata) nodata = true;
      sum += weight * v;
    }
    CHECK(s.values()[k] == (nodata ? kSpec.nodata : sum));
  }
  auto shuffled = stack;
  std::reverse(shuffled.begin(), shuffled.end());
  std::swap(shuffled[0], shuffled[2]);
  const auto s2 = susceptibility(shuffled, w);
  const auto d = incident_density(std::vector<HazardEvent>{}, geo::Peril::kFlood, kSpec, 500.0);
  const auto r1 = risk_score(s, d, 0.3, ClimateScenario::baseline(), geo::Peril::kFlood);
  const auto r2 = risk_score(s2, d, 0.3, ClimateScenario::baseline(), geo::Peril::kFlood);
  CHECK(r1 == r2);
}

TEST_CASE("default factor sets") {
  for (auto p : geo::kAllPerils) {
    const auto weights = default_weights(p);
    double sum = 0.0;
    for (const auto& [name, w] : weights.weights()) sum += w;
    CHECK(std::abs(sum - 1.0) <= 1e-9);
  }
  const auto wf = default_weights(geo::Peril::kWildfire).weights();
  CHECK(wf.count("fuel") == 1);
  CHECK(wf.count("summer_dryness") == 1);
  CHECK(default_weights(geo::Peril::kEarthquake).weights().count("fault_proximity") == 1);
  CHECK(default_weights(geo::Peril::kSubsidence).weights().count("geology_weakness") == 1);
  CHECK(default_weights(geo::Peril::kFlood).weights().count("low_elevation") == 1);
}

TEST_CASE("incident density examples") {
  const auto none = incident_density(std::vector<HazardEvent>{}, geo::Peril::kFlood, kSpec, 1000.0);
  CHECK(std::all_of(none.values().begin(), none.values().end(), [](double v) { return v == 0.0; }));

  const std::vector<HazardEvent> one{event_at(geo::Peril::kFlood, 1234.0, 2345.0),
                                     event_at(geo::Peril::kWildfire, 50.0, 50.0)};
  const auto d = incident_density(one, geo::Peril::kFlood, kSpec, 1000.0);
  for (std::size_t k = 0; k < kSpec.cell_count(); ++k) {
    const auto c = kSpec.center(kSpec.unflat(k));
    const bool inside = std::hypot(c.x - 1234.0, c.y - 2345.0) <= 1000.0;
    CHECK(d.values()[k] == (inside ? 1.0 : 0.0));
  }
  CHECK_THROWS_AS(incident_density(one, geo::Peril::kFlood, kSpec, 0.0), InvalidArgument);
}

TEST_CASE("incident density matches brute-force counts") {
  Rng rng(44);
  std::vector<HazardEvent> events;
  for (int i = 0; i < 40; ++i) {
    events.push_back(event_at(geo::Peril::kLandslide, 800.0 + rng.normal() * 150.0,
                              900.0 + rng.normal() * 150.0));
  }
  for (int i = 0; i < 15; ++i) {
    events.push_back(event_at(geo::Peril::kLandslide, rng.uniform(-200.0, 3400.0),
                              rng.uniform(-200.0, 3400.0)));
  }
  const double radius = 450.0;
  const auto d = incident_density(events, geo::Peril::kLandslide, kSpec, radius);
  std::vector<double> counts(kSpec.cell_count(), 0.0);
  for (std::size_t k = 0; k < counts.size(); ++k) {
    const auto c = kSpec.center(kSpec.unflat(k));
    for (const auto& e : events) counts[k] += std::hypot(c.x - e.x, c.y - e.y) <= radius;
  }
  const double mx = *std::max_element(counts.begin(), counts.end());
  REQUIRE(mx > 0.0);
  for (std::size_t k = 0; k < counts.size(); ++k) {
    CHECK(d.values()[k] == doctest::Approx(counts[k] / mx).epsilon(1e-15));
  }
  CHECK(*std::max_element(d.values().begin(), d.values().end()) == 1.0);
}

TEST_CASE("risk score examples") {
  const GridSpec g{1, 1, 0, 0, 1, -9999.0};
  const auto s = constant(g, 0.6, "s");
  const auto d = constant(g, 0.2, "d");
  const auto base = ClimateScenario::baseline();
  CHECK(risk_score(s, d, 1.0, base, geo::Peril::kFlood).values()[0] == 0.2);
  CHECK(risk_score(s, d, 0.5, base, geo::Peril::kFlood).values()[0] ==
        doctest::Approx(0.4).epsilon(1e-15));
  const ClimateScenario hot("hot", {{geo::Peril::kFlood, 1.3}});
  const auto high = constant(g, 0.9, "h");
  CHECK(risk_score(high, high, 0.5, hot, geo::Peril::kFlood).values()[0] == 1.0);
  CHECK(risk_score(high, high, 0.5, hot, geo::Peril::kWildfire).values()[0] == 0.9);
  CHECK_THROWS_AS(risk_score(s, d, 1.5, base, geo::Peril::kFlood), InvalidArgument);
  CHECK_THROWS_AS(risk_score(s, d, -0.1, base, geo::Peril::kFlood), InvalidArgument);
}

TEST_CASE("scenario multipliers of at least one never lower a class") {
  Rng rng(91);
  const auto s = random_factor(rng, "s", 0.05);
  const auto d = random_factor(rng, "d");
  const auto base = classify(risk_score(s, d, 0.5, ClimateScenario::baseline(), geo::Peril::kFlood));
  for (double m : {1.0, 1.01, 1.1, 1.5, 3.0}) {
    const ClimateScenario sc("m", {{geo::Peril::kFlood, m}});
    const auto c = classify(risk_score(s, d, 0.5, sc, geo::Peril::kFlood));
    for (std::size_t k = 0; k < kSpec.cell_count(); ++k) CHECK(c.values()[k] >= base.values()[k]);
  }
}

TEST_CASE("climate scenario invariants and file format") {
  const auto b = ClimateScenario::baseline();
  for (auto p : geo::kAllPerils) CHECK(b.multiplier(p) == 1.0);
  CHECK_THROWS_AS(ClimateScenario("x", {{geo::Peril::kFlood, 0.0}}), InvalidArgument);
  CHECK_THROWS_AS(ClimateScenario("baseline", {{geo::Peril::kFlood, 1.2}}), InvalidArgument);
  const auto sc = parse_scenario(
      R"({"name":"ssp2_2050","multipliers":{"wildfire":1.2,"flood":1.1,"landslide":1,"earthquake":1,"subsidence":1.05}})");
  CHECK(sc.name() == "ssp2_2050");
  CHECK(sc.multiplier(geo::Peril::kWildfire) == 1.2);
  const auto again = parse_scenario(format_scenario(sc));
  CHECK(again.name() == sc.name());
  for (auto p : geo::kAllPerils) CHECK(again.multiplier(p) == sc.multiplier(p));
  CHECK_THROWS(parse_scenario(R"({"name":"x","multipliers":{"tornado":1.2}})"));
}

TEST_CASE("recall examples") {
  const GridSpec g{4, 4, 0, 0, 100, -9999.0};
  std::vector<HazardEvent> ev;
  for (int i = 0; i < 4; ++i) ev.push_back(event_at(geo::Peril::kLandslide, 50 + 100 * i, 150));
  CHECK(validate_recall(constant(g, 5, "c"), ev, geo::Peril::kLandslide, 4) == 1.0);
  CHECK(validate_recall(constant(g, 1, "c"), ev, geo::Peril::kLandslide, 3) == 0.0);
  RasterLayer mixed(g, "c", "", 1.0);
  mixed.at(2, 0) = 4.0;
  mixed.at(2, 1) = 3.0;
  CHECK(validate_recall(mixed, ev, geo::Peril::kLandslide, 3) == 0.5);
  CHECK_THROWS(validate_recall(mixed, ev, geo::Peril::kFlood, 3));
  CHECK_THROWS(validate_recall(mixed, std::vector<HazardEvent>{}, geo::Peril::kLandslide, 3));
}

TEST_CASE("damage examples") {
  const auto t = DamageTable::defaults();
  CHECK(expected_damage(HazardClass(1), 100000.0, t) == 0.0);
  CHECK(expected_damage(HazardClass(4), 100000.0, t) == doctest::Approx(8000.0));
  double prev = -1.0;
  for (int c = 1; c <= 5; ++c) {
    const double v = expected_damage(HazardClass(c), 250000.0, t);
    CHECK(v >= prev);
    prev = v;
  }
  CHECK_THROWS_AS(DamageTable({0.1, 0.05, 0.2, 0.3, 0.4}), InvalidArgument);
  CHECK_THROWS_AS(DamageTable({0.0, 0.05, 0.2, 0.3, 1.4}), InvalidArgument);
  const auto parsed = parse_damage_table(R"({"1":0,"2":0.01,"3":0.03,"4":0.1,"5":0.3})");
  CHECK(parsed.ratios()[3] == 0.1);
  CHECK(parse_damage_table(format_damage_table(parsed)).ratios() == parsed.ratios());
}

TEST_CASE("factor layers are normalized and aligned") {
  const auto model = geo::generate_country(5, geo::default_grid(48), {});
  const auto factors = build_factor_layers(model);
  CHECK(factors.size() == 8);
  for (const auto& f : factors) {
    CHECK(f.spec() == model.spec);
    for (double v : f.values()) CHECK((v == model.spec.nodata || (v >= 0.0 && v <= 1.0)));
  }
  for (auto p : geo::kAllPerils) CHECK_NOTHROW(susceptibility(factors, default_weights(p)));
}
