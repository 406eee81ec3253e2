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

#include "terratwin/geomodel/rasterize.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "terratwin/geomodel/geometry.hpp"

namespace terratwin::geo {

RasterLayer polygon_mask(const GridSpec& spec,
                         std::span<const Polygon* const> polygons,
                         std::string name) {
  RasterLayer out(spec, std::move(name), "flag", 0.0);
  for (const Polygon* poly : polygons) {
    const Box box = bounding_box(*poly);
    const int c0 = std::max(0, static_cast<int>(std::floor((box.xmin - spec.xll) / spec.cellsize)));
    const int c1 = std::min(spec.ncols - 1, static_cast<int>(std::floor((box.xmax - spec.xll) / spec.cellsize)));
    const int r0 = std::max(0, static_cast<int>(std::floor((spec.ymax() - box.ymax) / spec.cellsize)));
    const int r1 = std::min(spec.nrows - 1, static_cast<int>(std::floor((spec.ymax() - box.ymin) / spec.cellsize)));
    for (int row = r0; row <= r1; ++row) {
      for (int col = c0; col <= c1; ++col) {
        if (out.at(row, col) == 0.0 && contains(*poly, spec.center({row, col}))) {
          out.at(row, col) = 1.0;
        }
      }
    }
  }
  return out;
}

RasterLayer feature_mask(const GridSpec& spec, const FeatureCollection& features,
                         FeatureKind kind, std::string name) {
  std::vector<const Polygon*> polys;
  for (const Feature* f : features.of_kind(kind)) {
    if (const auto* p = std::get_if<Polygon>(&f->geometry)) polys.push_back(p);
  }
  return polygon_mask(spec, polys, std::move(name));
}

}  // namespace terratwin::geo
