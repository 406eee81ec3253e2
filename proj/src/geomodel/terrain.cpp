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

#include "terratwin/geomodel/terrain.hpp"

#include <cmath>
#include <numbers>

#include "terratwin/common/error.hpp"

namespace terratwin::geo {

SlopeAspect derive_slope_aspect(const RasterLayer& elevation) {
  const GridSpec& s = elevation.spec();
  if (s.ncols < 3 || s.nrows < 3) {
    throw InvalidArgument("slope/aspect needs a grid of at least 3x3 cells");
  }
  SlopeAspect out{RasterLayer(s, "slope", "degrees", s.nodata),
                  RasterLayer(s, "aspect", "degrees", s.nodata)};
  constexpr double kDeg = 180.0 / std::numbers::pi;
  const double inv_2h = 1.0 / (2.0 * s.cellsize);
  for (int r = 1; r + 1 < s.nrows; ++r) {
    for (int c = 1; c + 1 < s.ncols; ++c) {
      const double east = elevation.at(r, c + 1);
      const double west = elevation.at(r, c - 1);
      const double north = elevation.at(r - 1, c);
      const double south = elevation.at(r + 1, c);
      if (elevation.is_nodata(east) || elevation.is_nodata(west) ||
          elevation.is_nodata(north) || elevation.is_nodata(south) ||
          elevation.is_nodata(elevation.at(r, c))) {
        continue;
      }
      const double gx = (east - west) * inv_2h;
      const double gy = (north - south) * inv_2h;
      const double grad = std::sqrt(gx * gx + gy * gy);
      out.slope.at(r, c) = std::atan(grad) * kDeg;
      if (grad < 1e-9) continue;
      double bearing = std::atan2(-gx, -gy) * kDeg;
      if (bearing < 0.0) bearing += 360.0;
      if (bearing >= 360.0) bearing -= 360.0;
      out.aspect.at(r, c) = bearing;
    }
  }
  return out;
}

}  // namespace terratwin::geo
