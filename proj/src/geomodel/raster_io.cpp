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

#include "terratwin/geomodel/raster_io.hpp"

#include <cmath>

#include "terratwin/common/checksum.hpp"
#include "terratwin/common/error.hpp"
#include "text_util.hpp"

namespace terratwin::geo {
namespace {

constexpr std::string_view kHeaderKeys[] = {
    "ncols", "nrows", "xllcorner", "yllcorner", "cellsize", "NODATA_value"};

}  // namespace

RasterLayer parse_raster(std::string_view text, std::string name) {
  const auto lines = detail::split_lines(text);
  double header[6] = {};
  for (std::size_t k = 0; k < 6; ++k) {
    const std::size_t lineno = k + 1;
    if (k >= lines.size()) {
      throw ParseError("missing header key '" + std::string(kHeaderKeys[k]) +
                           "'",
                       lineno);
    }
    const auto line = detail::trim(lines[k]);
    const auto sep = line.find_first_of(" \t");
    const auto key = line.substr(0, sep);
    if (key != kHeaderKeys[k]) {
      throw ParseError("expected header key '" + std::string(kHeaderKeys[k]) +
                           "', found '" + std::string(key) + "'",
                       lineno);
    }
    if (sep == std::string_view::npos) {
      throw ParseError("missing value for '" + std::string(key) + "'", lineno);
    }
    header[k] = detail::parse_double(line.substr(sep + 1), lineno);
  }
  GridSpec spec;
  if (header[0] != std::trunc(header[0]) || header[1] != std::trunc(header[1])) {
    throw ParseError("ncols/nrows must be integers", 1);
  }
  spec.ncols = static_cast<int>(header[0]);
  spec.nrows = static_cast<int>(header[1]);
  spec.xll = header[2];
  spec.yll = header[3];
  spec.cellsize = header[4];
  spec.nodata = header[5];
  try {
    spec.validate();
  } catch (const InvalidArgument& e) {
    throw ParseError(e.what(), 1);
  }

  std::vector<double> values;
  values.reserve(spec.cell_count());
  std::size_t data_rows = 0;
  for (std::size_t i = 6; i < lines.size(); ++i) {
    const std::size_t lineno = i + 1;
    auto line = detail::trim(lines[i]);
    if (line.empty()) continue;
    ++data_rows;
    std::size_t in_row = 0;
    while (!line.empty()) {
      const auto sep = line.find_first_of(" \t");
      const auto token = line.substr(0, sep);
      const double v = detail::parse_double(token, lineno);
      if (!std::isfinite(v)) {
        throw ParseError("non-finite value", lineno);
      }
      values.push_back(v);
      ++in_row;
      if (sep == std::string_view::npos) break;
      line = detail::trim(line.substr(sep));
    }
    if (in_row != static_cast<std::size_t>(spec.ncols)) {
      throw ParseError("cell count mismatch: row has " +
                           std::to_string(in_row) + " values, expected " +
                           std::to_string(spec.ncols),
                       lineno);
    }
  }
  if (values.size() != spec.cell_count() ||
      data_rows != static_cast<std::size_t>(spec.nrows)) {
    throw ParseError("cell count mismatch: expected " +
                     std::to_string(spec.cell_count()) + " values, got " +
                     std::to_string(values.size()));
  }
  return RasterLayer(spec, std::move(values), std::move(name));
}

std::string format_raster(const RasterLayer& layer) {
  const auto& s = layer.spec();
  std::string out;
  out.reserve(s.cell_count() * 8 + 128);
  out += "ncols " + std::to_string(s.ncols) + "\n";
  out += "nrows " + std::to_string(s.nrows) + "\n";
  out += "xllcorner " + detail::format_real(s.xll) + "\n";
  out += "yllcorner " + detail::format_real(s.yll) + "\n";
  out += "cellsize " + detail::format_real(s.cellsize) + "\n";
  out += "NODATA_value " + detail::format_real(s.nodata) + "\n";
  const auto values = layer.values();
  for (int r = 0; r < s.nrows; ++r) {
    for (int c = 0; c < s.ncols; ++c) {
      if (c) out += ' ';
      out += detail::format_real(values[s.flat({r, c})]);
    }
    out += '\n';
  }
  return out;
}

RasterLayer read_raster(const std::filesystem::path& path) {
  return parse_raster(read_file(path), path.stem().string());
}

void write_raster(const RasterLayer& layer, const std::filesystem::path& path) {
  write_file_atomic(path, format_raster(layer));
}

double quantize_for_text(double v) {
  if (std::abs(v) >= 1e9) return std::round(v);
  return std::round(v * 1e6) / 1e6;
}

}  // namespace terratwin::geo
