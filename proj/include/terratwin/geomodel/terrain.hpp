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

#ifndef TERRATWIN_GEOMODEL_TERRAIN_HPP_
#define TERRATWIN_GEOMODEL_TERRAIN_HPP_

#include "terratwin/geomodel/grid.hpp"

namespace terratwin::geo {

struct SlopeAspect {
  RasterLayer slope;   // degrees in [0, 90)
  RasterLayer aspect;  // compass degrees of steepest descent, [0, 360)
};

// Central differences with spacing cellsize. Border cells, cells next to a
// nodata neighbour and (for aspect) flat cells with |grad z| < 1e-9 are
// nodata. Throws InvalidArgument for grids smaller than 3x3.
SlopeAspect derive_slope_aspect(const RasterLayer& elevation);

}  // namespace terratwin::geo

#endif  // TERRATWIN_GEOMODEL_TERRAIN_HPP_
