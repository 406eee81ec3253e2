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

#ifndef TERRATWIN_PIPELINE_WEATHER_HPP_
#define TERRATWIN_PIPELINE_WEATHER_HPP_

#include <chrono>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace terratwin::pipeline {

using Minute = std::chrono::sys_time<std::chrono::minutes>;

struct Reading {
  std::string station;
  Minute time;
  double temp_c;
  double precip_mm;
  friend bool operator==(const Reading&, const Reading&) = default;
};

// "YYYY-MM-DDTHH:MM" with an optional ":00" seconds suffix.
std::optional<Minute> parse_timestamp(std::string_view text);
std::string format_timestamp(Minute t);

// CSV `station_id,timestamp,temp_c,precip_mm`; ParseError with line number.
std::vector<Reading> parse_weather_csv(std::string_view text);
std::string format_weather_csv(const std::vector<Reading>& readings);

enum class Granularity { kHourly, kDaily, kMonthly, kYearly };
std::string_view granularity_name(Granularity g);
std::optional<Granularity> parse_granularity(std::string_view name);

struct Bucket {
  Minute start;
  std::size_t samples = 0;
  std::optional<double> mean_temp_c;  // empty when the bucket has no sample
  double precip_mm = 0.0;
  bool missing() const { return samples == 0; }
  friend bool operator==(const Bucket&, const Bucket&) = default;
};

// Per station, consecutive buckets from the first to the last reading.
// Input order does not matter; a repeated (station, timestamp) throws
// InvalidArgument.
std::map<std::string, std::vector<Bucket>> aggregate_weather(
    std::vector<Reading> readings, Granularity g);

// Start of the bucket containing t.
Minute bucket_start(Minute t, Granularity g);
Minute next_bucket(Minute start, Granularity g);

}  // namespace terratwin::pipeline

#endif  // TERRATWIN_PIPELINE_WEATHER_HPP_
