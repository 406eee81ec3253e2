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

#include "terratwin/proximity/spatial_index.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "terratwin/common/error.hpp"

namespace terratwin::proximity {
namespace {

constexpr int kMaxBucketsPerAxis = 1024;

bool better(double d, std::int64_t id, const NearestHit& best) {
  return d < best.distance || (d == best.distance && id < best.id);
}

}  // namespace

SpatialIndex::SpatialIndex(std::vector<Item> items, double bucket_size)
    : items_(std::move(items)) {
  if (items_.empty()) return;
  geo::Box all{std::numeric_limits<double>::infinity(),
               std::numeric_limits<double>::infinity(),
               -std::numeric_limits<double>::infinity(),
               -std::numeric_limits<double>::infinity()};
  std::vector<geo::Box> boxes;
  boxes.reserve(items_.size());
  for (const auto& item : items_) {
    const auto b = geo::bounding_box(item.geometry);
    boxes.push_back(b);
    all.xmin = std::min(all.xmin, b.xmin);
    all.ymin = std::min(all.ymin, b.ymin);
    all.xmax = std::max(all.xmax, b.xmax);
    all.ymax = std::max(all.ymax, b.ymax);
  }
  const double w = std::max(all.xmax - all.xmin, 1e-9);
  const double h = std::max(all.ymax - all.ymin, 1e-9);
  if (bucket_size <= 0.0) {
    bucket_size = std::sqrt(w * h / static_cast<double>(items_.size())) * 1.5;
  }
  bucket_size = std::max({bucket_size, w / kMaxBucketsPerAxis,
                          h / kMaxBucketsPerAxis, 1e-9});
  bucket_ = bucket_size;
  x0_ = all.xmin;
  y0_ = all.ymin;
  ncols_ = std::max(1, static_cast<int>(std::ceil(w / bucket_)));
  nrows_ = std::max(1, static_cast<int>(std::ceil(h / bucket_)));
  buckets_.assign(static_cast<std::size_t>(ncols_) * nrows_, {});
  for (std::size_t i = 0; i < items_.size(); ++i) {
    const Range r = bucket_range(boxes[i]);
    for (int row = r.r0; row <= r.r1; ++row) {
      for (int col = r.c0; col <= r.c1; ++col) {
        buckets_[static_cast<std::size_t>(row) * ncols_ + col].push_back(
            static_cast<std::uint32_t>(i));
      }
    }
  }
}

SpatialIndex::Range SpatialIndex::bucket_range(const geo::Box& box) const {
  auto clamp_col = [this](double x) {
    return std::clamp(static_cast<int>(std::floor((x - x0_) / bucket_)), 0,
                      ncols_ - 1);
  };
  auto clamp_row = [this](double y) {
    return std::clamp(static_cast<int>(std::floor((y - y0_) / bucket_)), 0,
                      nrows_ - 1);
  };
  return {clamp_col(box.xmin), clamp_col(box.xmax), clamp_row(box.ymin),
          clamp_row(box.ymax)};
}

NearestHit SpatialIndex::nearest(geo::Point p) const {
  if (items_.empty()) throw DomainError("empty class");
  const Range start = bucket_range({p.x, p.y, p.x, p.y});
  NearestHit best{std::numeric_limits<std::int64_t>::max(),
                  std::numeric_limits<double>::infinity()};
  for (int ring = 0;; ++ring) {
    const int c0 = start.c0 - ring, c1 = start.c0 + ring;
    const int r0 = start.r0 - ring, r1 = start.r0 + ring;
    for (int row = std::max(r0, 0); row <= std::min(r1, nrows_ - 1); ++row) {
      const bool edge_row = row == r0 || row == r1;
      for (int col = std::max(c0, 0); col <= std::min(c1, ncols_ - 1); ++col) {
        if (!edge_row && col != c0 && col != c1) continue;
        for (const std::uint32_t i : bucket(col, row)) {
          const auto& item = items_[i];
          const double d = geo::distance(p, item.geometry);
          if (better(d, item.id, best)) best = {item.id, d};
        }
      }
    }
    // Anything not yet scanned lies in a bucket outside the block; bound its
    // distance from below by the gap to the nearest open side of the block.
    double bound = std::numeric_limits<double>::infinity();
    if (c0 > 0) bound = std::min(bound, std::max(0.0, p.x - (x0_ + c0 * bucket_)));
    if (c1 < ncols_ - 1) {
      bound = std::min(bound, std::max(0.0, x0_ + (c1 + 1) * bucket_ - p.x));
    }
    if (r0 > 0) bound = std::min(bound, std::max(0.0, p.y - (y0_ + r0 * bucket_)));
    if (r1 < nrows_ - 1) {
      bound = std::min(bound, std::max(0.0, y0_ + (r1 + 1) * bucket_ - p.y));
    }
    if (std::isinf(bound) || best.distance < bound) break;
  }
  return best;
}

std::vector<std::int64_t> SpatialIndex::within(geo::Point p,
                                               double radius) const {
  std::vector<std::int64_t> out;
  if (items_.empty() || radius < 0.0) return out;
  const Range r =
      bucket_range({p.x - radius, p.y - radius, p.x + radius, p.y + radius});
  std::vector<std::uint32_t> candidates;
  for (int row = r.r0; row <= r.r1; ++row) {
    for (int col = r.c0; col <= r.c1; ++col) {
      const auto& b = bucket(col, row);
      candidates.insert(candidates.end(), b.begin(), b.end());
    }
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()),
                   candidates.end());
  for (const std::uint32_t i : candidates) {
    if (geo::distance(p, items_[i].geometry) <= radius) {
      out.push_back(items_[i].id);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

FeatureIndex::FeatureIndex(const geo::FeatureCollection& features) {
  std::map<geo::FeatureKind, std::vector<SpatialIndex::Item>> grouped;
  for (const auto& f : features.all()) {
    grouped[f.kind].push_back({f.id, f.geometry});
  }
  for (auto& [kind, items] : grouped) {
    by_kind_.emplace(kind, SpatialIndex(std::move(items)));
  }
}

const SpatialIndex* FeatureIndex::index_for(geo::FeatureKind kind) const {
  const auto it = by_kind_.find(kind);
  return it == by_kind_.end() ? nullptr : &it->second;
}

NearestHit FeatureIndex::nearest(geo::Point p, geo::FeatureKind kind) const {
  const auto* idx = index_for(kind);
  if (idx == nullptr || idx->empty()) {
    throw DomainError("empty class: " + std::string(geo::kind_name(kind)));
  }
  return idx->nearest(p);
}

std::vector<std::int64_t> FeatureIndex::within(geo::Point p, double radius,
                                               geo::FeatureKind kind) const {
  const auto* idx = index_for(kind);
  if (idx == nullptr) return {};
  return idx->within(p, radius);
}

NearestHit nearest(const FeatureIndex& index, geo::Point p,
                   geo::FeatureKind kind) {
  return index.nearest(p, kind);
}

}  // namespace terratwin::proximity
