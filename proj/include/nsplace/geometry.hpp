#pragma once

#include <vector>

namespace nsplace {

constexpr double kGeomEps = 1e-9;

struct Point {
  double x = 0, y = 0;
};

struct Segment {
  Point a, b;
};

// Axis-aligned rectangle anchored at its lower-left corner.
struct Rect {
  double x = 0, y = 0, w = 0, h = 0;
};

// Counterclockwise vertex loop. Hulls may be degenerate: a single vertex
// (point) or two vertices (segment).
struct Polygon {
  std::vector<Point> v;
};

double cross(const Point& o, const Point& a, const Point& b);

// Minimal convex polygon containing all points (monotone chain). Collinear
// inputs collapse to a 2-vertex segment, a single point to a 1-vertex hull.
// Throws std::invalid_argument on empty input.
Polygon convex_hull(std::vector<Point> pts);

// Closed-set intersection test: boundary contact counts.
bool hulls_intersect(const Polygon& a, const Polygon& b);

// True iff the closed segments share a point, except when the intersection is
// a single point that is an endpoint of both segments.
bool segments_intersect(const Segment& s1, const Segment& s2);

struct Gap {
  double dx = 0, dy = 0;
};

// Signed boundary-to-boundary distances of the axis projections; negative
// values are overlap depths.
Gap rect_gap(const Rect& a, const Rect& b);

double rect_overlap_area(const Rect& a, const Rect& b);

}  // namespace nsplace
