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

#include "terratwin/geomodel/events.hpp"

#include <charconv>
#include <cstdio>

#include "terratwin/common/checksum.hpp"
#include "terratwin/common/error.hpp"
#include "text_util.hpp"

namespace terratwin::geo {

std::string_view peril_name(Peril p) {
  switch (p) {
    case Peril::kWildfire:
      return "wildfire";
    case Peril::kFlood:
      return "flood";
    case Peril::kLandslide:
      return "landslide";
    case Peril::kEarthquake:
      return "earthquake";
    case Peril::kSubsidence:
      return "subsidence";
  }
  return "";
}

std::optional<Peril> parse_peril(std::string_view name) {
  for (Peril p : kAllPerils) {
    if (peril_name(p) == name) return p;
  }
  return std::nullopt;
}

std::optional<Date> parse_date(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
    return std::nullopt;
  }
  int y = 0;
  unsigned m = 0, d = 0;
  auto parse = [](std::string_view s, auto& out) {
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
  };
  if (!parse(text.substr(0, 4), y) || !parse(text.substr(5, 2), m) ||
      !parse(text.substr(8, 2), d)) {
    return std::nullopt;
  }
  const Date date{std::chrono::year{y}, std::chrono::month{m},
                  std::chrono::day{d}};
  if (!date.ok()) return std::nullopt;
  return date;
}

std::string format_date(Date d) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(d.year()),
                static_cast<unsigned>(d.month()),
                static_cast<unsigned>(d.day()));
  return buf;
}

std::vector<HazardEvent> parse_events_csv(std::string_view text) {
  const auto lines = detail::split_lines(text);
  if (lines.empty() || detail::trim(lines[0]) != "peril,x,y,date,severity") {
    throw ParseError("expected header 'peril,x,y,date,severity'", 1);
  }
  std::vector<HazardEvent> events;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::size_t lineno = i + 1;
    const auto line = detail::trim(lines[i]);
    if (line.empty()) continue;
    const auto fields = detail::split(line, ',');
    if (fields.size() != 5) {
      throw ParseError("expected 5 fields, got " +
                           std::to_string(fields.size()),
                       lineno);
    }
    HazardEvent e;
    const auto peril = parse_peril(detail::trim(fields[0]));
    if (!peril) {
      throw ParseError("unknown peril '" + std::string(fields[0]) + "'",
                       lineno);
    }
    e.peril = *peril;
    e.x = detail::parse_double(fields[1], lineno);
    e.y = detail::parse_double(fields[2], lineno);
    const auto date = parse_date(detail::trim(fields[3]));
    if (!date) {
      throw ParseError("invalid date '" + std::string(fields[3]) + "'",
                       lineno);
    }
    e.date = *date;
    const double sev = detail::parse_double(fields[4], lineno);
    if (sev != static_cast<int>(sev) || sev < 1 || sev > 5) {
      throw ParseError("severity must be an integer in 1..5", lineno);
    }
    e.severity = static_cast<int>(sev);
    events.push_back(e);
  }
  return events;
}

std::string format_events_csv(const std::vector<HazardEvent>& events) {
  std::string out = "peril,x,y,date,severity\n";
  for (const auto& e : events) {
    out += peril_name(e.peril);
    out += ',';
    out += detail::format_real(e.x);
    out += ',';
    out += detail::format_real(e.y);
    out += ',';
    out += format_date(e.date);
    out += ',';
    out += std::to_string(e.severity);
    out += '\n';
  }
  return out;
}

std::vector<HazardEvent> read_events(const std::filesystem::path& path) {
  return parse_events_csv(read_file(path));
}

void write_events(const std::vector<HazardEvent>& events,
                  const std::filesystem::path& path) {
  write_file_atomic(path, format_events_csv(events));
}

}  // namespace terratwin::geo
