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

#ifndef TERRATWIN_GEOMODEL_GEOMETRY_HPP_
#define TERRATWIN_GEOMODEL_GEOMETRY_HPP_

#include <span>
#include <variant>
#include <vector>

#include "terratwin/geomodel/grid.hpp"

namespace terratwin::geo {

struct LineString {
  std::vector<Point> points;
  friend bool operator==(const LineString&, const LineString&) = default;
};

// rings[0] is the outer ring, further rings are holes. Each ring is stored
// closed (front() == back()).
struct Polygon {
  std::vector<std::vector<Point>> rings;
  friend bool operator==(const Polygon&, const Polygon&) = default;
};

using Geometry = std::variant<Point, LineString, Polygon>;

struct Box {
  double xmin, ymin, xmax, ymax;
  bool intersects(const Box& o) const {
    return xmin <= o.xmax && o.xmin <= xmax && ymin <= o.ymax &&
           o.ymin <= ymax;
  }
};

Box bounding_box(const Geometry& g);

// Squared distance from p to segment ab. The operation order here is the
// reference the vector kernels reproduce exactly.
inline double segment_distance_sq(Point p, Point a, Point b) {
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  const double len_sq = dx * dx + dy * dy;
  double t = 0.0;
  if (len_sq > 0.0) {
    t = ((p.x - a.x) * dx + (p.y - a.y) * dy) / len_sq;
    t = t < 0.0 ? 0.0 : (t > 1.0 ? 1.0 : t);
  }
  const double ex = p.x - (a.x + t * dx);
  const double ey = p.y - (a.y + t * dy);
  return ex * ex + ey * ey;
}

inline double point_distance_sq(Point p, Point q) {
  const double dx = p.x - q.x;
  const double dy = p.y - q.y;
  return dx * dx + dy * dy;
}

// Euclidean point-to-geometry distance: 0 inside (or on) a polygon,
// otherwise the distance to the nearest vertex/segment.
double distance(Point p, const Geometry& g);
double distance_sq(Point p, const Geometry& g);

// Even-odd test over all rings; points on any ring edge count as inside.
bool contains(const Polygon& poly, Point p);

// Shoelace area of a closed ring, positive when counter-clockwise.
double signed_ring_area(std::span<const Point> ring);
// Outer area minus holes.
double area(const Polygon& poly);
Point centroid(const Polygon& poly);

bool ring_closed(std::span<const Point> ring);
// True if any two non-adjacent edges of the closed ring touch or cross.
bool ring_self_intersects(std::span<const Point> ring);

bool segments_intersect(Point a, Point b, Point c, Point d);

}  // namespace terratwin::geo

#endif  // TERRATWIN_GEOMODEL_GEOMETRY_HPP_
