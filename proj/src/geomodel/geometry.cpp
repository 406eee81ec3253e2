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

#include "terratwin/geomodel/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace terratwin::geo {
namespace {

double cross(Point o, Point a, Point b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

bool on_segment(Point p, Point a, Point b) {
  return cross(a, b, p) == 0.0 && std::min(a.x, b.x) <= p.x &&
         p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
         p.y <= std::max(a.y, b.y);
}

double min_sq_to_path(Point p, std::span<const Point> pts) {
  if (pts.size() == 1) return point_distance_sq(p, pts[0]);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    best = std::min(best, segment_distance_sq(p, pts[i], pts[i + 1]));
  }
  return best;
}

struct DistanceSq {
  Point p;
  double operator()(const Point& q) const { return point_distance_sq(p, q); }
  double operator()(const LineString& l) const {
    if (l.points.empty()) return std::numeric_limits<double>::infinity();
    return min_sq_to_path(p, l.points);
  }
  double operator()(const Polygon& poly) const {
    if (poly.rings.empty()) return std::numeric_limits<double>::infinity();
    if (contains(poly, p)) return 0.0;
    double best = std::numeric_limits<double>::infinity();
    for (const auto& ring : poly.rings) {
      if (!ring.empty()) best = std::min(best, min_sq_to_path(p, ring));
    }
    return best;
  }
};

}  // namespace

Box bounding_box(const Geometry& g) {
  Box b{std::numeric_limits<double>::infinity(),
        std::numeric_limits<double>::infinity(),
        -std::numeric_limits<double>::infinity(),
        -std::numeric_limits<double>::infinity()};
  auto add = [&b](Point p) {
    b.xmin = std::min(b.xmin, p.x);
    b.ymin = std::min(b.ymin, p.y);
    b.xmax = std::max(b.xmax, p.x);
    b.ymax = std::max(b.ymax, p.y);
  };
  if (const auto* pt = std::get_if<Point>(&g)) {
    add(*pt);
  } else if (const auto* ls = std::get_if<LineString>(&g)) {
    for (const auto& p : ls->points) add(p);
  } else {
    for (const auto& ring : std::get<Polygon>(g).rings) {
      for (const auto& p : ring) add(p);
    }
  }
  return b;
}

double distance_sq(Point p, const Geometry& g) {
  return std::visit(DistanceSq{p}, g);
}

double distance(Point p, const Geometry& g) {
  return std::sqrt(distance_sq(p, g));
}

bool contains(const Polygon& poly, Point p) {
  bool inside = false;
  for (const auto& ring : poly.rings) {
    const std::size_t n = ring.size();
    if (n < 2) continue;
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
      const Point a = ring[i];
      const Point b = ring[j];
      if (on_segment(p, a, b)) return true;
      if ((a.y > p.y) != (b.y > p.y)) {
        const double x_cross = (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x;
        if (p.x < x_cross) inside = !inside;
      }
    }
  }
  return inside;
}

double signed_ring_area(std::span<const Point> ring) {
  double twice = 0.0;
  for (std::size_t i = 0; i + 1 < ring.size(); ++i) {
    twice += ring[i].x * ring[i + 1].y - ring[i + 1].x * ring[i].y;
  }
  return 0.5 * twice;
}

double area(const Polygon& poly) {
  if (poly.rings.empty()) return 0.0;
  double a = std::abs(signed_ring_area(poly.rings[0]));
  for (std::size_t i = 1; i < poly.rings.size(); ++i) {
    a -= std::abs(signed_ring_area(poly.rings[i]));
  }
  return a;
}

Point centroid(const Polygon& poly) {
  if (poly.rings.empty() || poly.rings[0].empty()) return {};
  const auto& ring = poly.rings[0];
  double a2 = 0.0, cx = 0.0, cy = 0.0;
  for (std::size_t i = 0; i + 1 < ring.size(); ++i) {
    const double c = ring[i].x * ring[i + 1].y - ring[i + 1].x * ring[i].y;
    a2 += c;
    cx += (ring[i].x + ring[i + 1].x) * c;
    cy += (ring[i].y + ring[i + 1].y) * c;
  }
  if (a2 == 0.0) return ring[0];
  return {cx / (3.0 * a2), cy / (3.0 * a2)};
}

bool ring_closed(std::span<const Point> ring) {
  return ring.size() >= 4 && ring.front() == ring.back();
}

bool segments_intersect(Point a, Point b, Point c, Point d) {
  const double d1 = cross(c, d, a);
  const double d2 = cross(c, d, b);
  const double d3 = cross(a, b, c);
  const double d4 = cross(a, b, d);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
      ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) {
    return true;
  }
  return (d1 == 0 && on_segment(a, c, d)) || (d2 == 0 && on_segment(b, c, d)) ||
         (d3 == 0 && on_segment(c, a, b)) || (d4 == 0 && on_segment(d, a, b));
}

bool ring_self_intersects(std::span<const Point> ring) {
  const std::size_t edges = ring.size() - 1;
  for (std::size_t i = 0; i < edges; ++i) {
    for (std::size_t j = i + 1; j < edges; ++j) {
      const bool adjacent = j == i + 1 || (i == 0 && j == edges - 1);
      if (adjacent) continue;
      if (segments_intersect(ring[i], ring[i + 1], ring[j], ring[j + 1])) {
        return true;
      }
    }
  }
  return false;
}

}  // namespace terratwin::geo
