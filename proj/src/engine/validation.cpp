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

#include "terratwin/engine/validation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

#include "terratwin/common/error.hpp"
#include "terratwin/proximity/routing.hpp"

namespace terratwin::engine {

using geo::FeatureKind;
using geo::Peril;

namespace {
constexpr int kLandcoverCodes = 6;
}

CellVectors cell_vectors(const Twin& twin) {
  const auto& spec = twin.spec();
  const auto& factors = twin.factors();
  std::vector<const geo::RasterLayer*> risks;
  for (Peril p : geo::kAllPerils) {
    risks.push_back(&twin.assessment(p, hazard::ClimateScenario::baseline()).risk);
  }
  const auto& lc = twin.model().layer("landcover");
  CellVectors out;
  for (std::size_t i = 0; i < spec.cell_count(); ++i) {
    bool ok = true;
    for (const auto& f : factors) ok = ok && f.values()[i] != spec.nodata;
    for (const auto* r : risks) ok = ok && r->values()[i] != spec.nodata;
    const double code = lc.values()[i];
    ok = ok && code >= 0 && code < kLandcoverCodes;
    if (!ok) continue;
    std::vector<double> v;
    v.reserve(factors.size() + risks.size() + kLandcoverCodes);
    for (const auto& f : factors) v.push_back(f.values()[i]);
    for (const auto* r : risks) v.push_back(r->values()[i]);
    for (int c = 0; c < kLandcoverCodes; ++c) v.push_back(code == c ? 1.0 : 0.0);
    out.cells.push_back(i);
    out.vectors.push_back(std::move(v));
  }
  return out;
}

std::vector<pipeline::ServiceCheck> default_service_checks(const Twin& twin) {
  const Twin* t = &twin;
  std::vector<pipeline::ServiceCheck> checks;

  checks.push_back({"risk_class", [t](std::size_t cell) {
    const geo::Point p = t->spec().center(t->spec().unflat(cell));
    for (Peril peril : geo::kAllPerils) {
      const auto& a = t->assessment(peril, hazard::ClimateScenario::baseline());
      const RiskAnswer ans = t->risk_at(peril, p, hazard::ClimateScenario::baseline());
      if (ans.score != a.risk.values()[cell]) return false;
      if (ans.hazard_class != hazard::classify_value(ans.score)) return false;
    }
    return true;
  }});

  checks.push_back({"susceptibility_sum", [t](std::size_t cell) {
    for (Peril peril : geo::kAllPerils) {
      double sum = 0.0;
      const hazard::FactorWeights weights = hazard::default_weights(peril);
      for (const auto& [name, w] : weights.weights()) {
        const auto it = std::find_if(t->factors().begin(), t->factors().end(),
                                     [&](const geo::RasterLayer& f) { return f.name() == name; });
        if (it == t->factors().end()) return false;
        sum += w * it->values()[cell];
      }
      const auto& a = t->assessment(peril, hazard::ClimateScenario::baseline());
      if (std::fabs(sum - a.susceptibility.values()[cell]) > 1e-12) return false;
    }
    return true;
  }});

  checks.push_back({"scenario_monotone", [t](std::size_t cell) {
    for (Peril peril : geo::kAllPerils) {
      const auto& base = t->assessment(peril, hazard::ClimateScenario::baseline());
      for (const auto& s : builtin_scenarios()) {
        if (t->assessment(peril, s).classes.values()[cell] < base.classes.values()[cell]) {
          return false;
        }
      }
    }
    return true;
  }});

  checks.push_back({"nearest_amenity", [t](std::size_t cell) {
    const geo::Point p = t->spec().center(t->spec().unflat(cell));
    for (FeatureKind k : {FeatureKind::kAmenityHospital, FeatureKind::kAmenitySchool,
                          FeatureKind::kBlueFlagBeach}) {
      const auto ans = t->proximity_at(geo::kind_name(k), p);
      double best = std::numeric_limits<double>::infinity();
      std::int64_t best_id = 0;
      for (const geo::Feature* f : t->model().features.of_kind(k)) {
        const double d = geo::distance(p, f->geometry);
        if (d < best || (d == best && f->id < best_id)) {
          best = d;
          best_id = f->id;
        }
      }
      if (ans.distance_m != best || ans.id != best_id) return false;
    }
    return true;
  }});

  checks.push_back({"drive_to_hospital", [t](std::size_t cell) {
    const auto& net = t->model().roads;
    const geo::Point p = t->spec().center(t->spec().unflat(cell));
    const auto hit = t->feature_index().nearest(p, FeatureKind::kAmenityHospital);
    const geo::Feature* h = t->model().features.find(hit.id);
    const auto origin = t->snap(p);
    const auto dest = t->snap(std::get<geo::Point>(h->geometry));
    const double there = proximity::travel_time(net, origin, dest);
    const double back = proximity::travel_time(net, dest, origin);
    if (!std::isfinite(there)) return false;
    return std::fabs(there - back) <= 1e-9 * std::max(1.0, there);
  }});

  return checks;
}

double ValidationReport::reduction() const {
  return suite.executed == 0 ? 0.0
                             : static_cast<double>(full_grid_executions) / suite.executed;
}

ValidationReport validate_representatives(const Twin& twin, std::size_t k, std::uint64_t seed) {
  const CellVectors cv = cell_vectors(twin);
  if (cv.vectors.empty()) throw DomainError("no cell has a complete feature vector");
  const auto clusters = pipeline::cluster_scenarios(cv.vectors, k, seed);
  ValidationReport r;
  r.population = cv.cells.size();
  r.k = k;
  r.iterations = clusters.iterations;
  r.cluster_sizes.assign(k, 0);
  for (std::size_t a : clusters.assignment) ++r.cluster_sizes[a];
  for (std::size_t rep : clusters.representatives) {
    if (rep < cv.cells.size()) r.representative_cells.push_back(cv.cells[rep]);
  }
  const auto checks = default_service_checks(twin);
  r.full_grid_executions = cv.cells.size() * checks.size();
  r.suite = pipeline::run_representative_suite(r.representative_cells, checks);
  return r;
}

std::string format_validation(const ValidationReport& r) {
  nlohmann::json failures = nlohmann::json::array();
  for (const auto& f : r.suite.failures) failures.push_back({{"check", f.check}, {"cell", f.item}});
  nlohmann::json j = {{"population", r.population},
                      {"k", r.k},
                      {"iterations", r.iterations},
                      {"cluster_sizes", r.cluster_sizes},
                      {"representative_cells", r.representative_cells},
                      {"executed", r.suite.executed},
                      {"passed", r.suite.passed},
                      {"full_grid_executions", r.full_grid_executions},
                      {"reduction", r.reduction()},
                      {"failures", failures}};
  return j.dump(2) + "\n";
}

}  // namespace terratwin::engine
