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

#include "terratwin/pipeline/weather.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>

#include "terratwin/common/error.hpp"
#include "terratwin/geomodel/events.hpp"
#include "../geomodel/text_util.hpp"

namespace terratwin::pipeline {

namespace {

using namespace std::chrono;

bool two_digits(std::string_view s, int& out) {
  if (s.size() != 2 || s[0] < '0' || s[0] > '9' || s[1] < '0' || s[1] > '9') {
    return false;
  }
  out = (s[0] - '0') * 10 + (s[1] - '0');
  return true;
}

}  // namespace

std::optional<Minute> parse_timestamp(std::string_view text) {
  if (text.size() != 16 && text.size() != 19) return std::nullopt;
  if (text[10] != 'T' && text[10] != ' ') return std::nullopt;
  const auto date = geo::parse_date(text.substr(0, 10));
  if (!date) return std::nullopt;
  int hh, mm;
  if (!two_digits(text.substr(11, 2), hh) || text[13] != ':' ||
      !two_digits(text.substr(14, 2), mm) || hh > 23 || mm > 59) {
    return std::nullopt;
  }
  if (text.size() == 19 && text.substr(16) != ":00") return std::nullopt;
  return Minute{sys_days{*date}} + hours{hh} + minutes{mm};
}

std::string format_timestamp(Minute t) {
  const auto day = floor<days>(t);
  const auto rest = t - day;
  char buf[8];
  std::snprintf(buf, sizeof buf, "T%02d:%02d",
                static_cast<int>(duration_cast<hours>(rest).count()),
                static_cast<int>((rest % hours{1}).count()));
  return geo::format_date(year_month_day{day}) + buf;
}

std::vector<Reading> parse_weather_csv(std::string_view text) {
  const auto lines = geo::detail::split_lines(text);
  if (lines.empty() || geo::detail::trim(lines[0]) != "station_id,timestamp,temp_c,precip_mm") {
    throw ParseError("expected header 'station_id,timestamp,temp_c,precip_mm'", 1);
  }
  std::vector<Reading> out;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::string_view line = geo::detail::trim(lines[i]);
    if (line.empty()) continue;
    const auto fields = geo::detail::split(line, ',');
    if (fields.size() != 4) throw ParseError("expected 4 fields", i + 1);
    Reading r;
    r.station = std::string(geo::detail::trim(fields[0]));
    if (r.station.empty()) throw ParseError("empty station id", i + 1);
    const auto t = parse_timestamp(geo::detail::trim(fields[1]));
    if (!t) throw ParseError("bad timestamp '" + std::string(fields[1]) + "'", i + 1);
    r.time = *t;
    r.temp_c = geo::detail::parse_double(fields[2], i + 1);
    r.precip_mm = geo::detail::parse_double(fields[3], i + 1);
    if (r.precip_mm < 0.0) throw ParseError("negative precipitation", i + 1);
    out.push_back(std::move(r));
  }
  return out;
}

std::string format_weather_csv(const std::vector<Reading>& readings) {
  std::string out = "station_id,timestamp,temp_c,precip_mm\n";
  for (const auto& r : readings) {
    out += r.station + "," + format_timestamp(r.time) + "," +
           geo::detail::format_real(r.temp_c) + "," +
           geo::detail::format_real(r.precip_mm) + "\n";
  }
  return out;
}

std::string_view granularity_name(Granularity g) {
  switch (g) {
    case Granularity::kHourly: return "hourly";
    case Granularity::kDaily: return "daily";
    case Granularity::kMonthly: return "monthly";
    case Granularity::kYearly: return "yearly";
  }
  return "";
}

std::optional<Granularity> parse_granularity(std::string_view name) {
  for (Granularity g : {Granularity::kHourly, Granularity::kDaily,
                        Granularity::kMonthly, Granularity::kYearly}) {
    if (granularity_name(g) == name) return g;
  }
  return std::nullopt;
}

Minute bucket_start(Minute t, Granularity g) {
  switch (g) {
    case Granularity::kHourly: return floor<hours>(t);
    case Granularity::kDaily: return floor<days>(t);
    case Granularity::kMonthly: {
      const year_month_day d{floor<days>(t)};
      return sys_days{d.year() / d.month() / 1};
    }
    case Granularity::kYearly: {
      const year_month_day d{floor<days>(t)};
      return sys_days{d.year() / January / 1};
    }
  }
  return t;
}

Minute next_bucket(Minute start, Granularity g) {
  switch (g) {
    case Granularity::kHourly: return start + hours{1};
    case Granularity::kDaily: return start + days{1};
    case Granularity::kMonthly: {
      const year_month_day d{floor<days>(start)};
      return sys_days{(d.year() / d.month() / 1) + months{1}};
    }
    case Granularity::kYearly: {
      const year_month_day d{floor<days>(start)};
      return sys_days{(d.year() + years{1}) / January / 1};
    }
  }
  return start;
}

std::map<std::string, std::vector<Bucket>> aggregate_weather(
    std::vector<Reading> readings, Granularity g) {
  std::sort(readings.begin(), readings.end(), [](const Reading& a, const Reading& b) {
    return std::tie(a.station, a.time) < std::tie(b.station, b.time);
  });
  for (std::size_t i = 1; i < readings.size(); ++i) {
    if (readings[i].station == readings[i - 1].station &&
        readings[i].time == readings[i - 1].time) {
      throw InvalidArgument("duplicate reading for station " + readings[i].station +
                            " at " + format_timestamp(readings[i].time));
    }
  }
  std::map<std::string, std::vector<Bucket>> out;
  std::size_t i = 0;
  while (i < readings.size()) {
    const std::string& station = readings[i].station;
    auto& series = out[station];
    Minute start = bucket_start(readings[i].time, g);
    double temp_sum = 0.0;
    while (i < readings.size() && readings[i].station == station) {
      const Minute end = next_bucket(start, g);
      Bucket b;
      b.start = start;
      temp_sum = 0.0;
      while (i < readings.size() && readings[i].station == station &&
             readings[i].time < end) {
        temp_sum += readings[i].temp_c;
        b.precip_mm += readings[i].precip_mm;
        ++b.samples;
        ++i;
      }
      if (b.samples > 0) b.mean_temp_c = temp_sum / static_cast<double>(b.samples);
      series.push_back(b);
      start = end;
    }
  }
  return out;
}

}  // namespace terratwin::pipeline
