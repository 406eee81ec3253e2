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

#include "terratwin/geomodel/grid.hpp"

#include <cmath>

#include "terratwin/common/error.hpp"

namespace terratwin::geo {

void GridSpec::validate() const {
  if (ncols < 1) throw InvalidArgument("grid: ncols must be >= 1");
  if (nrows < 1) throw InvalidArgument("grid: nrows must be >= 1");
  if (!std::isfinite(xll)) throw InvalidArgument("grid: xll must be finite");
  if (!std::isfinite(yll)) throw InvalidArgument("grid: yll must be finite");
  if (!(cellsize > 0.0) || !std::isfinite(cellsize)) {
    throw InvalidArgument("grid: cellsize must be > 0");
  }
  if (!std::isfinite(nodata)) {
    throw InvalidArgument("grid: nodata must be finite");
  }
}

std::optional<CellIndex> GridSpec::cell_of(Point p) const {
  if (!contains(p)) return std::nullopt;
  int col = static_cast<int>(std::floor((p.x - xll) / cellsize));
  int row_from_south = static_cast<int>(std::floor((p.y - yll) / cellsize));
  if (col >= ncols) col = ncols - 1;
  if (row_from_south >= nrows) row_from_south = nrows - 1;
  if (col < 0) col = 0;
  if (row_from_south < 0) row_from_south = 0;
  return CellIndex{nrows - 1 - row_from_south, col};
}

RasterLayer::RasterLayer(GridSpec spec, std::string name, std::string units,
                         double fill)
    : spec_(spec),
      values_(spec.cell_count(), fill),
      name_(std::move(name)),
      units_(std::move(units)) {
  spec_.validate();
}

RasterLayer::RasterLayer(GridSpec spec, std::vector<double> values,
                         std::string name, std::string units)
    : spec_(spec),
      values_(std::move(values)),
      name_(std::move(name)),
      units_(std::move(units)) {
  spec_.validate();
  if (values_.size() != spec_.cell_count()) {
    throw InvalidArgument("raster '" + name_ + "': expected " +
                          std::to_string(spec_.cell_count()) +
                          " values, got " + std::to_string(values_.size()));
  }
}

std::optional<double> RasterLayer::sample(Point p) const {
  const auto cell = spec_.cell_of(p);
  if (!cell) return std::nullopt;
  const double v = at(*cell);
  if (is_nodata(v)) return std::nullopt;
  return v;
}

void RasterLayer::validate() const {
  for (std::size_t k = 0; k < values_.size(); ++k) {
    const double v = values_[k];
    if (!std::isfinite(v) && v != spec_.nodata) {
      throw DomainError("raster '" + name_ + "': non-finite value at cell " +
                        std::to_string(k));
    }
  }
}

void require_aligned(const GridSpec& spec, const RasterLayer& layer) {
  if (!(layer.spec() == spec)) {
    throw InvalidArgument("layer '" + layer.name() +
                          "' is not aligned to the model grid");
  }
}

}  // namespace terratwin::geo
