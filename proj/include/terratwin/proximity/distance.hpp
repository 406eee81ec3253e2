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

#ifndef TERRATWIN_PROXIMITY_DISTANCE_HPP_
#define TERRATWIN_PROXIMITY_DISTANCE_HPP_

#include <span>

#include "terratwin/geomodel/feature.hpp"
#include "terratwin/geomodel/grid.hpp"

namespace terratwin::proximity {

// Exact euclidean distance (meters) from every cell center to the nearest
// geometry of `kind`. Throws DomainError("empty class: ...") if none exist.
geo::RasterLayer distance_layer(const geo::GridSpec& spec,
                                const geo::FeatureCollection& features,
                                geo::FeatureKind kind);

// Same over an explicit geometry list.
geo::RasterLayer distance_layer(const geo::GridSpec& spec,
                                std::span<const geo::Geometry> geometries,
                                std::string name);

}  // namespace terratwin::proximity

#endif  // TERRATWIN_PROXIMITY_DISTANCE_HPP_
