#include "nsplace/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nsplace {

double cross(const Point& o, const Point& a, const Point& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

namespace {

bool pts_equal(const Point& a, const Point& b) {
  return std::abs(a.x - b.x) <= kGeomEps && std::abs(a.y - b.y) <= kGeomEps;
}

bool on_segment(const Point& p, const Point& a, const Point& b) {
  if (std::abs(cross(a, b, p)) > kGeomEps * (1.0 + std::abs(p.x) + std::abs(p.y)))
    return false;
  return p.x >= std::min(a.x, b.x) - kGeomEps &&
         p.x <= std::max(a.x, b.x) + kGeomEps &&
         p.y >= std::min(a.y, b.y) - kGeomEps &&
         p.y <= std::max(a.y, b.y) + kGeomEps;
}

// Closed test: endpoints and collinear overlap count.
bool segments_touch(const Point& p1, const Point& p2, const Point& q1,
                    const Point& q2) {
  double d1 = cross(q1, q2, p1);
  double d2 = cross(q1, q2, p2);
  double d3 = cross(p1, p2, q1);
  double d4 = cross(p1, p2, q2);
  double s = kGeomEps * (1.0 + std::abs(p1.x) + std::abs(p2.x) +
                         std::abs(q1.x) + std::abs(q2.x) + std::abs(p1.y) +
                         std::abs(p2.y) + std::abs(q1.y) + std::abs(q2.y));
  if (((d1 > s && d2 < -s) || (d1 < -s && d2 > s)) &&
      ((d3 > s && d4 < -s) || (d3 < -s && d4 > s)))
    return true;
  return on_segment(p1, q1, q2) || on_segment(p2, q1, q2) ||
         on_segment(q1, p1, p2) || on_segment(q2, p1, p2);
}

// Closed membership in a convex CCW polygon; handles degenerate hulls.
bool point_in_hull(const Point& p, const Polygon& poly) {
  size_t n = poly.v.size();
  if (n == 1) return pts_equal(p, poly.v[0]);
  if (n == 2) return on_segment(p, poly.v[0], poly.v[1]);
  for (size_t i = 0; i < n; ++i) {
    const Point& a = poly.v[i];
    const Point& b = poly.v[(i + 1) % n];
    if (cross(a, b, p) < -kGeomEps * (1.0 + std::abs(p.x) + std::abs(p.y)))
      return false;
  }
  return true;
}

}  // namespace

Polygon convex_hull(std::vector<Point> pts) {
  if (pts.empty()) throw std::invalid_argument("convex_hull: empty input");
  std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const Point& a, const Point& b) {
                          return pts_equal(a, b);
                        }),
            pts.end());
  size_t n = pts.size();
  Polygon hull;
  if (n <= 2) {
    hull.v = pts;
    return hull;
  }
  std::vector<Point> h(2 * n);
  size_t k = 0;
  for (size_t i = 0; i < n; ++i) {  // lower chain
    while (k >= 2 && cross(h[k - 2], h[k - 1], pts[i]) <= kGeomEps) --k;
    h[k++] = pts[i];
  }
  size_t lower = k + 1;
  for (size_t i = n - 1; i-- > 0;) {  // upper chain
    while (k >= lower && cross(h[k - 2], h[k - 1], pts[i]) <= kGeomEps) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  hull.v = std::move(h);
  return hull;
}

bool hulls_intersect(const Polygon& a, const Polygon& b) {
  if (a.v.empty() || b.v.empty()) return false;
  auto edges = [](const Polygon& p) {
    std::vector<std::pair<Point, Point>> e;
    size_t n = p.v.size();
    if (n == 2) {
      e.push_back({p.v[0], p.v[1]});
    } else if (n > 2) {
      for (size_t i = 0; i < n; ++i) e.push_back({p.v[i], p.v[(i + 1) % n]});
    }
    return e;
  };
  auto ea = edges(a);
  auto eb = edges(b);
  for (const auto& s1 : ea)
    for (const auto& s2 : eb)
      if (segments_touch(s1.first, s1.second, s2.first, s2.second)) return true;
  // One hull fully inside the other, or point-vs-anything.
  if (point_in_hull(a.v[0], b)) return true;
  if (point_in_hull(b.v[0], a)) return true;
  return false;
}

bool segments_intersect(const Segment& s1, const Segment& s2) {
  if (!segments_touch(s1.a, s1.b, s2.a, s2.b)) return false;
  // Exclude a lone shared endpoint. A collinear overlap of positive length
  // still counts, as does an endpoint landing in the other segment's interior.
  auto endpoint_pair = [&](const Point& p, const Point& q) {
    return pts_equal(p, q);
  };
  bool shared_ends =
      endpoint_pair(s1.a, s2.a) || endpoint_pair(s1.a, s2.b) ||
      endpoint_pair(s1.b, s2.a) || endpoint_pair(s1.b, s2.b);
  if (!shared_ends) return true;
  // Find the shared endpoint(s); if any contact exists beyond them, it is a
  // real crossing.
  for (const Point* p : {&s1.a, &s1.b}) {
    bool is_shared = endpoint_pair(*p, s2.a) || endpoint_pair(*p, s2.b);
    if (!is_shared && on_segment(*p, s2.a, s2.b)) return true;
  }
  for (const Point* q : {&s2.a, &s2.b}) {
    bool is_shared = endpoint_pair(*q, s1.a) || endpoint_pair(*q, s1.b);
    if (!is_shared && on_segment(*q, s1.a, s1.b)) return true;
  }
  // Both segments degenerate to the shared point, or they only meet there.
  // Proper crossings through a shared endpoint are impossible for straight
  // segments, except collinear overlap which the loop above catches.
  // Double-shared endpoints (identical segments) do overlap:
  int shared = 0;
  for (const Point* p : {&s1.a, &s1.b})
    if (endpoint_pair(*p, s2.a) || endpoint_pair(*p, s2.b)) ++shared;
  return shared >= 2 && !pts_equal(s1.a, s1.b);
}

Gap rect_gap(const Rect& a, const Rect& b) {
  Gap g;
  g.dx = std::max(a.x, b.x) - std::min(a.x + a.w, b.x + b.w);
  g.dy = std::max(a.y, b.y) - std::min(a.y + a.h, b.y + b.h);
  return g;
}

double rect_overlap_area(const Rect& a, const Rect& b) {
  double ox = std::min(a.x + a.w, b.x + b.w) - std::max(a.x, b.x);
  double oy = std::min(a.y + a.h, b.y + b.h) - std::max(a.y, b.y);
  if (ox <= 0 || oy <= 0) return 0;
  return ox * oy;
}

}  // namespace nsplace
