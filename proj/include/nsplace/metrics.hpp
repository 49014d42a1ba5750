#pragma once

#include <map>
#include <string>
#include <vector>

#include "nsplace/design.hpp"
#include "nsplace/net_separation.hpp"

namespace nsplace {

struct MetricsReport {
  double hpwl = 0;
  double ns_objective = 0;
  long crossing_count = 0;
  long overlap_count = 0;
  double overlap_area = 0;
  std::map<std::string, double> runtime_s;  // per stage
};

double hpwl_total(const Design& d, const Placement& p);

// Pair-averaged separator residual with fresh full-restart solves.
double ns_objective(const Design& d, const Placement& p);

// Star-model crossing proxy: each net becomes centroid-to-pin segments;
// counts intersecting segment pairs from different nets (lone shared
// endpoints excluded, zero-length segments ignored).
long crossing_count(const Design& d, const Placement& p);

struct OverlapStats {
  long count = 0;
  double area = 0;
};

// Pairwise effective-footprint intersection; overlap depths below 1e-7 mm
// are treated as abutment to absorb LP roundoff.
OverlapStats overlap_violations(const Design& d, const Placement& p);

bool placement_in_bounds(const Design& d, const Placement& p,
                         double tol = 1e-6);

MetricsReport compute_report(const Design& d, const Placement& p,
                             const std::map<std::string, double>& timings = {});

// Aligned text table; when a baseline is given, a percent-improvement column
// 100*(base-new)/base is added.
std::string format_table(const MetricsReport& r,
                         const MetricsReport* baseline = nullptr);

std::string report_to_csv(const MetricsReport& r);
MetricsReport report_from_csv(const std::string& csv);

struct SvgOptions {
  bool draw_hulls = false;
  double scale = 10.0;  // px per mm
};

std::string render_svg(const Design& d, const Placement& p,
                       const SvgOptions& opts = {});

}  // namespace nsplace
