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

#ifndef TERRATWIN_GEOMODEL_EVENTS_HPP_
#define TERRATWIN_GEOMODEL_EVENTS_HPP_

#include <array>
#include <chrono>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace terratwin::geo {

enum class Peril { kWildfire, kFlood, kLandslide, kEarthquake, kSubsidence };

inline constexpr std::array<Peril, 5> kAllPerils = {
    Peril::kWildfire, Peril::kFlood, Peril::kLandslide, Peril::kEarthquake,
    Peril::kSubsidence};

std::string_view peril_name(Peril p);
std::optional<Peril> parse_peril(std::string_view name);

using Date = std::chrono::year_month_day;

// Strict YYYY-MM-DD; nullopt if malformed or not a calendar day.
std::optional<Date> parse_date(std::string_view text);
std::string format_date(Date d);

struct HazardEvent {
  Peril peril = Peril::kWildfire;
  double x = 0.0;
  double y = 0.0;
  Date date{};
  int severity = 1;  // 1..5

  friend bool operator==(const HazardEvent&, const HazardEvent&) = default;
};

// CSV with header `peril,x,y,date,severity`. Errors carry line numbers.
std::vector<HazardEvent> parse_events_csv(std::string_view text);
std::string format_events_csv(const std::vector<HazardEvent>& events);
std::vector<HazardEvent> read_events(const std::filesystem::path& path);
void write_events(const std::vector<HazardEvent>& events,
                  const std::filesystem::path& path);

}  // namespace terratwin::geo

#endif  // TERRATWIN_GEOMODEL_EVENTS_HPP_
