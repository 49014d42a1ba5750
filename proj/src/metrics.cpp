#include "nsplace/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nsplace/objective.hpp"
#include "nsplace/util.hpp"

namespace nsplace {

double hpwl_total(const Design& d, const Placement& p) {
  double total = 0;
  for (const auto& net : d.nets) total += hpwl_net(d, net, p);
  return total;
}

double ns_objective(const Design& d, const Placement& p) {
  PairSet pairs = pair_set(d, &p);
  return ns_cost(d, p, pairs);
}

namespace {

struct StarSegment {
  Segment s;
  int net;
};

std::vector<StarSegment> star_segments(const Design& d, const Placement& p) {
  std::vector<StarSegment> segs;
  for (size_t e = 0; e < d.nets.size(); ++e) {
    const Net& net = d.nets[e];
    if (net.pins.size() < 2) continue;
    double cx = 0, cy = 0;
    std::vector<Point> pts;
    pts.reserve(net.pins.size());
    for (const auto& ref : net.pins) {
      Point pt = pin_position(p, d, ref.comp, ref.pin);
      pts.push_back(pt);
      cx += pt.x;
      cy += pt.y;
    }
    cx /= double(pts.size());
    cy /= double(pts.size());
    for (const auto& pt : pts) {
      if (std::abs(pt.x - cx) < 1e-12 && std::abs(pt.y - cy) < 1e-12) continue;
      segs.push_back({Segment{{cx, cy}, pt}, int(e)});
    }
  }
  return segs;
}

}  // namespace

long crossing_count(const Design& d, const Placement& p) {
  auto segs = star_segments(d, p);
  long count = 0;
  for (size_t a = 0; a < segs.size(); ++a)
    for (size_t b = a + 1; b < segs.size(); ++b) {
      if (segs[a].net == segs[b].net) continue;
      if (segments_intersect(segs[a].s, segs[b].s)) ++count;
    }
  return count;
}

OverlapStats overlap_violations(const Design& d, const Placement& p) {
  OverlapStats out;
  int n = int(d.components.size());
  for (int i = 0; i < n; ++i) {
    Rect a = footprint(d, p, i);
    for (int j = i + 1; j < n; ++j) {
      Rect b = footprint(d, p, j);
      double ox = std::min(a.x + a.w, b.x + b.w) - std::max(a.x, b.x);
      double oy = std::min(a.y + a.h, b.y + b.h) - std::max(a.y, b.y);
      if (ox > 1e-7 && oy > 1e-7) {
        ++out.count;
        out.area += ox * oy;
      }
    }
  }
  return out;
}

bool placement_in_bounds(const Design& d, const Placement& p, double tol) {
  for (size_t i = 0; i < d.components.size(); ++i) {
    Rect f = footprint(d, p, int(i));
    if (f.x < -tol || f.y < -tol || f.x + f.w > d.board.width + tol ||
        f.y + f.h > d.board.height + tol)
      return false;
  }
  return true;
}

MetricsReport compute_report(const Design& d, const Placement& p,
                             const std::map<std::string, double>& timings) {
  MetricsReport r;
  r.hpwl = hpwl_total(d, p);
  r.ns_objective = ns_objective(d, p);
  r.crossing_count = crossing_count(d, p);
  OverlapStats ov = overlap_violations(d, p);
  r.overlap_count = ov.count;
  r.overlap_area = ov.area;
  r.runtime_s = timings;
  return r;
}

std::string format_table(const MetricsReport& r, const MetricsReport* base) {
  std::ostringstream os;
  auto row = [&](const std::string& name, double value, double bvalue,
                 bool have_base) {
    char buf[160];
    if (have_base && bvalue != 0) {
      double imp = 100.0 * (bvalue - value) / bvalue;
      std::snprintf(buf, sizeof(buf), "%-22s %14.4f  (%+.1f%%)\n", name.c_str(),
                    value, imp);
    } else {
      std::snprintf(buf, sizeof(buf), "%-22s %14.4f\n", name.c_str(), value);
    }
    os << buf;
  };
  row("hpwl_mm", r.hpwl, base ? base->hpwl : 0, base != nullptr);
  row("ns_objective", r.ns_objective, base ? base->ns_objective : 0,
      base != nullptr);
  row("crossing_count", double(r.crossing_count),
      base ? double(base->crossing_count) : 0, base != nullptr);
  row("overlap_count", double(r.overlap_count), 0, false);
  row("overlap_area_mm2", r.overlap_area, 0, false);
  for (const auto& [stage, secs] : r.runtime_s)
    row("runtime_" + stage + "_s", secs, 0, false);
  return os.str();
}

std::string report_to_csv(const MetricsReport& r) {
  std::ostringstream os;
  os << "metric,value\n";
  os << "hpwl_mm," << fmt_double(r.hpwl) << "\n";
  os << "ns_objective," << fmt_double(r.ns_objective) << "\n";
  os << "crossing_count," << r.crossing_count << "\n";
  os << "overlap_count," << r.overlap_count << "\n";
  os << "overlap_area_mm2," << fmt_double(r.overlap_area) << "\n";
  for (const auto& [stage, secs] : r.runtime_s)
    os << "runtime_" << stage << "_s," << fmt_double(secs) << "\n";
  return os.str();
}

MetricsReport report_from_csv(const std::string& csv) {
  MetricsReport r;
  std::istringstream in(csv);
  std::string line;
  while (std::getline(in, line)) {
    auto comma = line.find(',');
    if (comma == std::string::npos) continue;
    std::string key = line.substr(0, comma);
    std::string val = line.substr(comma + 1);
    if (key == "metric") continue;
    double v = std::strtod(val.c_str(), nullptr);
    if (key == "hpwl_mm") r.hpwl = v;
    else if (key == "ns_objective") r.ns_objective = v;
    else if (key == "crossing_count") r.crossing_count = long(v);
    else if (key == "overlap_count") r.overlap_count = long(v);
    else if (key == "overlap_area_mm2") r.overlap_area = v;
    else if (key.rfind("runtime_", 0) == 0 && key.size() > 10)
      r.runtime_s[key.substr(8, key.size() - 10)] = v;
  }
  return r;
}

}  // namespace nsplace
