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

#ifndef TERRATWIN_GEOMODEL_RASTER_IO_HPP_
#define TERRATWIN_GEOMODEL_RASTER_IO_HPP_

#include <filesystem>
#include <string>
#include <string_view>

#include "terratwin/geomodel/grid.hpp"

namespace terratwin::geo {

// ASCII grid: `ncols`, `nrows`, `xllcorner`, `yllcorner`, `cellsize`,
// `NODATA_value` header lines in that order, then nrows lines of ncols
// values, north row first. Integral values are written without a fraction,
// other reals with 6 decimals.
RasterLayer parse_raster(std::string_view text, std::string name = "");
std::string format_raster(const RasterLayer& layer);

// The layer name defaults to the file stem.
RasterLayer read_raster(const std::filesystem::path& path);
void write_raster(const RasterLayer& layer, const std::filesystem::path& path);

// Rounds to the nearest value the text format reproduces exactly.
double quantize_for_text(double v);

}  // namespace terratwin::geo

#endif  // TERRATWIN_GEOMODEL_RASTER_IO_HPP_
