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

#include "terratwin/proximity/distance.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "terratwin/common/error.hpp"
#include "terratwin/simd/kernels.hpp"

namespace terratwin::proximity {
namespace {

struct SegmentColumns {
  std::vector<double> ax, ay, bx, by;
  void add(geo::Point a, geo::Point b) {
    ax.push_back(a.x);
    ay.push_back(a.y);
    bx.push_back(b.x);
    by.push_back(b.y);
  }
  simd::SegmentSoA view() const {
    return {ax.data(), ay.data(), bx.data(), by.data(), ax.size()};
  }
};

}  // namespace

geo::RasterLayer distance_layer(const geo::GridSpec& spec,
                                std::span<const geo::Geometry> geometries,
                                std::string name) {
  spec.validate();
  if (geometries.empty()) throw DomainError("empty class: " + name);

  std::vector<double> px, py;
  SegmentColumns segs;
  std::vector<const geo::Polygon*> polygons;
  std::vector<geo::Box> polygon_boxes;
  for (const auto& g : geometries) {
    if (const auto* p = std::get_if<geo::Point>(&g)) {
      px.push_back(p->x);
      py.push_back(p->y);
    } else if (const auto* l = std::get_if<geo::LineString>(&g)) {
      if (l->points.size() == 1) {
        px.push_back(l->points[0].x);
        py.push_back(l->points[0].y);
      }
      for (std::size_t i = 0; i + 1 < l->points.size(); ++i) {
        segs.add(l->points[i], l->points[i + 1]);
      }
    } else {
      const auto& poly = std::get<geo::Polygon>(g);
      polygons.push_back(&poly);
      polygon_boxes.push_back(geo::bounding_box(g));
      for (const auto& ring : poly.rings) {
        for (std::size_t i = 0; i + 1 < ring.size(); ++i) {
          segs.add(ring[i], ring[i + 1]);
        }
      }
    }
  }

  geo::RasterLayer out(spec, std::move(name), "m");
  const auto& k = simd::kernels();
  std::vector<double> xs(static_cast<std::size_t>(spec.ncols));
  for (int c = 0; c < spec.ncols; ++c) xs[c] = spec.center_x(c);
  std::vector<double> best(xs.size());
  const auto seg_view = segs.view();
  for (int r = 0; r < spec.nrows; ++r) {
    const double y = spec.center_y(r);
    std::fill(best.begin(), best.end(), std::numeric_limits<double>::infinity());
    if (!px.empty()) {
      k.min_sq_to_points(xs.data(), xs.size(), y, px.data(), py.data(),
                         px.size(), best.data());
    }
    if (seg_view.count > 0) {
      k.min_sq_to_segments(xs.data(), xs.size(), y, seg_view, best.data());
    }
    for (int c = 0; c < spec.ncols; ++c) {
      double d = std::sqrt(best[c]);
      const geo::Box here{xs[c], y, xs[c], y};
      for (std::size_t i = 0; i < polygons.size(); ++i) {
        if (polygon_boxes[i].intersects(here) &&
            geo::contains(*polygons[i], {xs[c], y})) {
          d = 0.0;
          break;
        }
      }
      out.at(r, c) = d;
    }
  }
  return out;
}

geo::RasterLayer distance_layer(const geo::GridSpec& spec,
                                const geo::FeatureCollection& features,
                                geo::FeatureKind kind) {
  std::vector<geo::Geometry> geoms;
  for (const auto* f : features.of_kind(kind)) geoms.push_back(f->geometry);
  return distance_layer(spec, geoms,
                        "distance_" + std::string(geo::kind_name(kind)));
}

}  // namespace terratwin::proximity
