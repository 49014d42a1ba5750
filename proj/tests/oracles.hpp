// Independent reference implementations used by tests only. These stay
// deliberately naive and share no code with the library paths they check.
#pragma once

#include <functional>
#include <vector>

#include "nsplace/design.hpp"
#include "nsplace/geometry.hpp"
#include "nsplace/net_separation.hpp"

namespace oracle {

using nsplace::Design;
using nsplace::Placement;
using nsplace::Point;

// Separating-axis intersection test over edge normals, edge directions and
// vertex differences (covers degenerate hulls).
bool sat_hulls_intersect(const std::vector<Point>& a,
                         const std::vector<Point>& b);

// Distance between convex hulls; 0 when they intersect.
double hull_distance(const std::vector<Point>& a, const std::vector<Point>& b);

// Brute-force minimization of the two-sided hinge residual: 720-direction
// grid with exact gamma line search, log-norm rescan, then local grid
// refinement around the best sample.
double separator_residual_oracle(const std::vector<Point>& e,
                                 const std::vector<Point>& ep);

// Exhaustive enumeration of the legalization objective over a coordinate
// grid (positions and both orientations), skipping overlapping layouts.
// Returns +inf when nothing fits.
double enumerate_layout_optimum(const Design& d, double grid_step);

// All-pairs star-segment crossing count with its own predicates.
long crossing_count_oracle(const Design& d, const Placement& p);

// Central finite differences.
double central_diff(const std::function<double(double)>& f, double x0,
                    double step);

}  // namespace oracle
