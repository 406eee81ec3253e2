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

#include "terratwin/hazard/hazard.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <json.hpp>

#include "terratwin/common/error.hpp"
#include "terratwin/simd/kernels.hpp"

namespace terratwin::hazard {

HazardClass::HazardClass(int value) : value_(value) {
  if (value < kMinClass || value > kMaxClass) {
    throw InvalidArgument("hazard class must be in 1..5, got " +
                          std::to_string(value));
  }
}

std::string_view class_label(int hazard_class) {
  static constexpr std::string_view kLabels[] = {"minimal", "low", "moderate",
                                                 "high", "very high"};
  if (hazard_class < kMinClass || hazard_class > kMaxClass) return "";
  return kLabels[hazard_class - 1];
}

FactorWeights::FactorWeights(std::map<std::string, double> weights)
    : weights_(std::move(weights)) {
  if (weights_.empty()) throw InvalidArgument("factor weights are empty");
  double sum = 0.0;
  for (const auto& [name, w] : weights_) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw InvalidArgument("factor weight for '" + name + "' must be >= 0");
    }
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw InvalidArgument("factor weights must sum to 1");
  }
}

FactorWeights default_weights(Peril peril) {
  switch (peril) {
    case Peril::kWildfire:
      return FactorWeights(
          {{"fuel", 0.5}, {"slope_norm", 0.2}, {"summer_dryness", 0.3}});
    case Peril::kFlood:
      return FactorWeights({{"flatness", 0.3},
                            {"precipitation_norm", 0.3},
                            {"low_elevation", 0.4}});
    case Peril::kLandslide:
      return FactorWeights({{"slope_norm", 0.5},
                            {"precipitation_norm", 0.2},
                            {"geology_weakness", 0.3}});
    case Peril::kEarthquake:
      return FactorWeights({{"fault_proximity", 1.0}});
    case Peril::kSubsidence:
      return FactorWeights({{"geology_weakness", 1.0}});
  }
  throw InvalidArgument("unknown peril");
}

DamageTable::DamageTable(std::array<double, 5> ratios) : ratios_(ratios) {
  for (std::size_t i = 0; i < ratios_.size(); ++i) {
    if (!(ratios_[i] >= 0.0 && ratios_[i] <= 1.0)) {
      throw InvalidArgument("damage ratio for class " + std::to_string(i + 1) +
                            " must be in [0,1]");
    }
    if (i > 0 && ratios_[i] < ratios_[i - 1]) {
      throw InvalidArgument("damage ratios must be non-decreasing in class");
    }
  }
}

DamageTable DamageTable::defaults() {
  return DamageTable({0.0, 0.005, 0.02, 0.08, 0.25});
}

ClimateScenario::ClimateScenario(std::string name,
                                 std::map<Peril, double> multipliers)
    : name_(std::move(name)), multipliers_(std::move(multipliers)) {
  if (name_.empty()) throw InvalidArgument("scenario name is empty");
  for (const auto& [peril, m] : multipliers_) {
    if (!(m > 0.0) || !std::isfinite(m)) {
      throw InvalidArgument("scenario multiplier for " +
                            std::string(geo::peril_name(peril)) +
                            " must be > 0");
    }
    if (name_ == "baseline" && m != 1.0) {
      throw InvalidArgument("baseline scenario multipliers must all be 1");
    }
  }
  for (Peril p : geo::kAllPerils) multipliers_.try_emplace(p, 1.0);
}

ClimateScenario ClimateScenario::baseline() { return {"baseline", {}}; }

double ClimateScenario::multiplier(Peril p) const {
  const auto it = multipliers_.find(p);
  return it == multipliers_.end() ? 1.0 : it->second;
}

RasterLayer susceptibility(std::span<const RasterLayer> factors,
                           const FactorWeights& weights) {
  std::vector<const RasterLayer*> chosen;
  std::vector<double> w;
  for (const auto& [name, weight] : weights.weights()) {
    const auto it =
        std::find_if(factors.begin(), factors.end(),
                     [&name](const RasterLayer& l) { return l.name() == name; });
    if (it == factors.end()) {
      throw InvalidArgument("weight given for missing factor layer '" + name +
                            "'");
    }
    chosen.push_back(&*it);
    w.push_back(weight);
  }
  const geo::GridSpec& spec = chosen.front()->spec();
  std::vector<const double*> columns;
  for (const auto* layer : chosen) {
    geo::require_aligned(spec, *layer);
    for (const double v : layer->values()) {
      if (v != spec.nodata && !(v >= 0.0 && v <= 1.0)) {
        throw InvalidArgument("factor layer '" + layer->name() +
                              "' has values outside [0,1]");
      }
    }
    columns.push_back(layer->values().data());
  }
  RasterLayer out(spec, "susceptibility", "1");
  simd::kernels().weighted_sum(columns.data(), w.data(), columns.size(),
                               spec.cell_count(), spec.nodata,
                               out.mutable_values().data());
  return out;
}

RasterLayer incident_density(std::span<const geo::HazardEvent> events,
                             Peril peril, const geo::GridSpec& spec,
                             double radius) {
  spec.validate();
  if (!(radius > 0.0)) throw InvalidArgument("density radius must be > 0");
  std::vector<double> counts(spec.cell_count(), 0.0);
  for (const auto& e : events) {
    if (e.peril != peril) continue;
    // Only cells whose center can lie within `radius` of the event.
    const int c0 = std::max(
        0, static_cast<int>(std::floor((e.x - radius - spec.xll) / spec.cellsize)) - 1);
    const int c1 = std::min(
        spec.ncols - 1,
        static_cast<int>(std::floor((e.x + radius - spec.xll) / spec.cellsize)) + 1);
    const int s0 = std::max(
        0, static_cast<int>(std::floor((e.y - radius - spec.yll) / spec.cellsize)) - 1);
    const int s1 = std::min(
        spec.nrows - 1,
        static_cast<int>(std::floor((e.y + radius - spec.yll) / spec.cellsize)) + 1);
    for (int south = s0; south <= s1; ++south) {
      const int row = spec.nrows - 1 - south;
      const double cy = spec.center_y(row);
      for (int col = c0; col <= c1; ++col) {
        const double dx = spec.center_x(col) - e.x;
        const double dy = cy - e.y;
        if (std::sqrt(dx * dx + dy * dy) <= radius) {
          counts[spec.flat({row, col})] += 1.0;
        }
      }
    }
  }
  const double max_count = *std::max_element(counts.begin(), counts.end());
  if (max_count > 0.0) {
    for (double& c : counts) c /= max_count;
  }
  return RasterLayer(spec, std::move(counts), "incident_density", "1");
}

RasterLayer risk_score(const RasterLayer& s, const RasterLayer& d,
                       double alpha, const ClimateScenario& scenario,
                       Peril peril) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw InvalidArgument("alpha must be in [0,1]");
  }
  geo::require_aligned(s.spec(), d);
  RasterLayer out(s.spec(), "risk", "1");
  simd::kernels().risk_blend(s.values().data(), d.values().data(),
                             s.spec().cell_count(), alpha,
                             scenario.multiplier(peril), s.spec().nodata,
                             out.mutable_values().data());
  return out;
}

RasterLayer classify(const RasterLayer& risk) {
  RasterLayer out(risk.spec(), "hazard_class", "class");
  simd::kernels().classify(risk.values().data(), risk.spec().cell_count(),
                           risk.spec().nodata, out.mutable_values().data());
  return out;
}

int classify_value(double risk) {
  double out = 0.0;
  simd::scalar::table().classify(&risk, 1, std::nan(""), &out);
  return static_cast<int>(out);
}

double validate_recall(const RasterLayer& classes,
                       std::span<const geo::HazardEvent> held_out, Peril peril,
                       int threshold_class) {
  HazardClass threshold(threshold_class);
  std::size_t total = 0, hits = 0;
  for (const auto& e : held_out) {
    if (e.peril != peril) continue;
    ++total;
    const auto c = classes.sample({e.x, e.y});
    if (c && *c >= threshold.value()) ++hits;
  }
  if (total == 0) {
    throw DomainError("recall undefined: no held-out " +
                      std::string(geo::peril_name(peril)) + " events");
  }
  return static_cast<double>(hits) / static_cast<double>(total);
}

double expected_damage(HazardClass c, double property_value,
                       const DamageTable& table) {
  return property_value * table.ratio(c);
}

ClimateScenario parse_scenario(std::string_view json_text) {
  using nlohmann::json;
  try {
    const auto doc = json::parse(json_text);
    std::map<Peril, double> m;
    if (doc.contains("multipliers")) {
      for (const auto& [key, value] : doc.at("multipliers").items()) {
        const auto peril = geo::parse_peril(key);
        if (!peril) throw ParseError("unknown peril '" + key + "'");
        m[*peril] = value.get<double>();
      }
    }
    return ClimateScenario(doc.at("name").get<std::string>(), std::move(m));
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed scenario: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw ParseError(e.what());
  }
}

std::string format_scenario(const ClimateScenario& s) {
  nlohmann::json m = nlohmann::json::object();
  for (const auto& [peril, value] : s.multipliers()) {
    m[std::string(geo::peril_name(peril))] = value;
  }
  return nlohmann::json{{"name", s.name()}, {"multipliers", m}}.dump(2) + "\n";
}

DamageTable parse_damage_table(std::string_view json_text) {
  using nlohmann::json;
  try {
    const auto doc = json::parse(json_text);
    std::array<double, 5> r{};
    for (int c = 1; c <= 5; ++c) r[c - 1] = doc.at(std::to_string(c)).get<double>();
    return DamageTable(r);
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed damage table: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw ParseError(e.what());
  }
}

std::string format_damage_table(const DamageTable& t) {
  nlohmann::json j = nlohmann::json::object();
  for (int c = 1; c <= 5; ++c) j[std::to_string(c)] = t.ratios()[c - 1];
  return j.dump(2) + "\n";
}

}  // namespace terratwin::hazard
