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

#ifndef TERRATWIN_GEOMODEL_GRID_HPP_
#define TERRATWIN_GEOMODEL_GRID_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace terratwin::geo {

inline constexpr double kDefaultNodata = -9999.0;

struct Point {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point&, const Point&) = default;
};

// Row index counts from the north edge, column index from the west edge.
struct CellIndex {
  int row = 0;
  int col = 0;
  friend bool operator==(const CellIndex&, const CellIndex&) = default;
};

// Spatial frame of a raster: planar meters, lower-left anchored.
struct GridSpec {
  int ncols = 0;
  int nrows = 0;
  double xll = 0.0;
  double yll = 0.0;
  double cellsize = 0.0;
  double nodata = kDefaultNodata;

  // Two layers are aligned iff all six fields are equal.
  friend bool operator==(const GridSpec&, const GridSpec&) = default;

  // Throws InvalidArgument naming the first bad field.
  void validate() const;

  std::size_t cell_count() const {
    return static_cast<std::size_t>(ncols) * static_cast<std::size_t>(nrows);
  }
  std::size_t flat(CellIndex c) const {
    return static_cast<std::size_t>(c.row) * static_cast<std::size_t>(ncols) +
           static_cast<std::size_t>(c.col);
  }
  CellIndex unflat(std::size_t k) const {
    return {static_cast<int>(k / static_cast<std::size_t>(ncols)),
            static_cast<int>(k % static_cast<std::size_t>(ncols))};
  }
  bool in_bounds(int row, int col) const {
    return row >= 0 && row < nrows && col >= 0 && col < ncols;
  }

  double center_x(int col) const { return xll + (col + 0.5) * cellsize; }
  double center_y(int row) const {
    return yll + (nrows - 1 - row + 0.5) * cellsize;
  }
  Point center(CellIndex c) const { return {center_x(c.col), center_y(c.row)}; }

  double xmax() const { return xll + ncols * cellsize; }
  double ymax() const { return yll + nrows * cellsize; }
  // Closed extent test.
  bool contains(Point p) const {
    return p.x >= xll && p.x <= xmax() && p.y >= yll && p.y <= ymax();
  }
  // Cell containing p; points on the east/north outer edge map to the last
  // column/row. nullopt outside the extent.
  std::optional<CellIndex> cell_of(Point p) const;
};

// Georeferenced scalar grid, row-major with the north row first.
class RasterLayer {
 public:
  RasterLayer() = default;
  // Filled with `fill`.
  RasterLayer(GridSpec spec, std::string name, std::string units = "",
              double fill = 0.0);
  // Throws InvalidArgument when values.size() != cell count.
  RasterLayer(GridSpec spec, std::vector<double> values, std::string name,
              std::string units = "");

  const GridSpec& spec() const { return spec_; }
  const std::string& name() const { return name_; }
  const std::string& units() const { return units_; }
  void set_name(std::string name) { name_ = std::move(name); }
  void set_units(std::string units) { units_ = std::move(units); }

  std::span<const double> values() const { return values_; }
  std::span<double> mutable_values() { return values_; }

  double at(int row, int col) const { return values_[spec_.flat({row, col})]; }
  double at(CellIndex c) const { return values_[spec_.flat(c)]; }
  double& at(int row, int col) { return values_[spec_.flat({row, col})]; }
  double& at(CellIndex c) { return values_[spec_.flat(c)]; }

  bool is_nodata(double v) const { return v == spec_.nodata; }
  bool is_nodata(CellIndex c) const { return is_nodata(at(c)); }

  // Value at the cell containing p; nullopt outside the grid or on nodata.
  std::optional<double> sample(Point p) const;

  // Every value is finite or equals nodata. Throws DomainError otherwise.
  void validate() const;

  friend bool operator==(const RasterLayer&, const RasterLayer&) = default;

 private:
  GridSpec spec_;
  std::vector<double> values_;
  std::string name_;
  std::string units_;
};

// Throws InvalidArgument unless every layer shares `spec`.
void require_aligned(const GridSpec& spec, const RasterLayer& layer);

}  // namespace terratwin::geo

#endif  // TERRATWIN_GEOMODEL_GRID_HPP_
