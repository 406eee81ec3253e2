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

#ifndef TERRATWIN_PROXIMITY_SPATIAL_INDEX_HPP_
#define TERRATWIN_PROXIMITY_SPATIAL_INDEX_HPP_

#include <cstdint>
#include <map>
#include <vector>

#include "terratwin/geomodel/feature.hpp"
#include "terratwin/geomodel/geometry.hpp"

namespace terratwin::proximity {

struct NearestHit {
  std::int64_t id = 0;
  double distance = 0.0;  // meters
  friend bool operator==(const NearestHit&, const NearestHit&) = default;
};

// Uniform cell-bucket grid over geometry bounding boxes. Queries return
// exactly what a linear scan using geo::distance would: the minimum distance,
// ties broken by the smallest id.
class SpatialIndex {
 public:
  struct Item {
    std::int64_t id;
    geo::Geometry geometry;
  };

  SpatialIndex() = default;
  // bucket_size <= 0 picks a size from the item density.
  explicit SpatialIndex(std::vector<Item> items, double bucket_size = 0.0);

  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  const std::vector<Item>& items() const { return items_; }

  // Throws DomainError("empty class") when the index holds no items.
  NearestHit nearest(geo::Point p) const;
  // Ids of items within `radius` (inclusive), ascending.
  std::vector<std::int64_t> within(geo::Point p, double radius) const;

 private:
  struct Range {
    int c0, c1, r0, r1;
  };
  Range bucket_range(const geo::Box& box) const;
  const std::vector<std::uint32_t>& bucket(int col, int row) const {
    return buckets_[static_cast<std::size_t>(row) * ncols_ + col];
  }

  std::vector<Item> items_;
  std::vector<std::vector<std::uint32_t>> buckets_;
  double x0_ = 0.0, y0_ = 0.0, bucket_ = 1.0;
  int ncols_ = 0, nrows_ = 0;
};

// One SpatialIndex per feature kind.
class FeatureIndex {
 public:
  FeatureIndex() = default;
  explicit FeatureIndex(const geo::FeatureCollection& features);

  // Throws DomainError("empty class: <kind>") when no feature has `kind`.
  NearestHit nearest(geo::Point p, geo::FeatureKind kind) const;
  std::vector<std::int64_t> within(geo::Point p, double radius,
                                   geo::FeatureKind kind) const;
  const SpatialIndex* index_for(geo::FeatureKind kind) const;

 private:
  std::map<geo::FeatureKind, SpatialIndex> by_kind_;
};

// Free-function form of FeatureIndex::nearest.
NearestHit nearest(const FeatureIndex& index, geo::Point p,
                   geo::FeatureKind kind);

}  // namespace terratwin::proximity

#endif  // TERRATWIN_PROXIMITY_SPATIAL_INDEX_HPP_
