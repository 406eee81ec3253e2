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

#ifndef TERRATWIN_GEOMODEL_RASTERIZE_HPP_
#define TERRATWIN_GEOMODEL_RASTERIZE_HPP_

#include <span>
#include <string>

#include "terratwin/geomodel/feature.hpp"
#include "terratwin/geomodel/grid.hpp"

namespace terratwin::geo {

// 1 where the cell center lies in any of the polygons (boundary included),
// 0 elsewhere.
RasterLayer polygon_mask(const GridSpec& spec,
                         std::span<const Polygon* const> polygons,
                         std::string name);

// Mask of every polygon feature of `kind`.
RasterLayer feature_mask(const GridSpec& spec, const FeatureCollection& features,
                         FeatureKind kind, std::string name);

}  // namespace terratwin::geo

#endif  // TERRATWIN_GEOMODEL_RASTERIZE_HPP_
