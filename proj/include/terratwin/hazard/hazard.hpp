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

#ifndef TERRATWIN_HAZARD_HAZARD_HPP_
#define TERRATWIN_HAZARD_HAZARD_HPP_

#include <array>
#include <map>
#include <span>
#include <string>
#include <string_view>

#include "terratwin/geomodel/events.hpp"
#include "terratwin/geomodel/grid.hpp"

namespace terratwin::hazard {

using geo::Peril;
using geo::RasterLayer;

// Ordinal hazard class, 1 (minimal) to 5 (very high).
class HazardClass {
 public:
  // Throws InvalidArgument outside 1..5.
  explicit HazardClass(int value);
  int value() const { return value_; }
  friend auto operator<=>(const HazardClass&, const HazardClass&) = default;

 private:
  int value_;
};

inline constexpr int kMinClass = 1;
inline constexpr int kMaxClass = 5;

// Short plain-language label for a class ("minimal" ... "very high").
std::string_view class_label(int hazard_class);

// Factor layer name -> non-negative weight, summing to 1 within 1e-9.
class FactorWeights {
 public:
  explicit FactorWeights(std::map<std::string, double> weights);
  const std::map<std::string, double>& weights() const { return weights_; }

 private:
  std::map<std::string, double> weights_;
};

// Default factor set per peril.
FactorWeights default_weights(Peril peril);

// Expected damage ratio per class; monotone non-decreasing, each in [0,1].
class DamageTable {
 public:
  explicit DamageTable(std::array<double, 5> ratios);
  // Placeholder ratios {0, 0.005, 0.02, 0.08, 0.25}.
  static DamageTable defaults();
  double ratio(HazardClass c) const { return ratios_[c.value() - 1]; }
  const std::array<double, 5>& ratios() const { return ratios_; }

 private:
  std::array<double, 5> ratios_;
};

class ClimateScenario {
 public:
  // Perils without an entry get multiplier 1. Throws InvalidArgument for a
  // non-positive multiplier, or for a "baseline" scenario that is not all 1.
  ClimateScenario(std::string name, std::map<Peril, double> multipliers);
  static ClimateScenario baseline();

  const std::string& name() const { return name_; }
  double multiplier(Peril p) const;
  const std::map<Peril, double>& multipliers() const { return multipliers_; }

 private:
  std::string name_;
  std::map<Peril, double> multipliers_;
};

// Weighted sum of aligned factor layers (looked up by name), accumulated in
// weight-name order. Any nodata factor gives nodata. Throws InvalidArgument
// when a weighted layer is missing, misaligned or outside [0,1].
RasterLayer susceptibility(std::span<const RasterLayer> factors,
                           const FactorWeights& weights);

// Per cell: number of `peril` events within `radius` meters of the center,
// divided by the grid-wide maximum count (all zeros when no event counts).
RasterLayer incident_density(std::span<const geo::HazardEvent> events,
                             Peril peril, const geo::GridSpec& spec,
                             double radius);

// clamp(m_p * (alpha * density + (1 - alpha) * susceptibility), 0, 1).
RasterLayer risk_score(const RasterLayer& susceptibility,
                       const RasterLayer& density, double alpha,
                       const ClimateScenario& scenario, Peril peril);

// Class per cell: 1 + number of thresholds {0.2, 0.4, 0.6, 0.8} reached.
RasterLayer classify(const RasterLayer& risk);
int classify_value(double risk);

// Fraction of held-out `peril` events whose cell has class >= threshold.
// Events outside the grid or on nodata count as misses. Throws DomainError
// when no held-out event of the peril exists.
double validate_recall(const RasterLayer& classes,
                       std::span<const geo::HazardEvent> held_out, Peril peril,
                       int threshold_class);

double expected_damage(HazardClass c, double property_value,
                       const DamageTable& table);

// Scenario / damage-table JSON files.
ClimateScenario parse_scenario(std::string_view json_text);
std::string format_scenario(const ClimateScenario& s);
DamageTable parse_damage_table(std::string_view json_text);
std::string format_damage_table(const DamageTable& t);

}  // namespace terratwin::hazard

#endif  // TERRATWIN_HAZARD_HAZARD_HPP_
