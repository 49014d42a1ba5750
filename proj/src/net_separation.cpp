#include "nsplace/net_separation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nsplace {

PinMatrix pin_matrix(const Design& d, const Net& net, const Placement& p) {
  PinMatrix m;
  m.rows.reserve(net.pins.size());
  m.pin_slots.reserve(net.pins.size());
  for (const auto& ref : net.pins) {
    m.rows.push_back(pin_position(p, d, ref.comp, ref.pin));
    m.pin_slots.push_back(d.pin_slot(ref.comp, ref.pin));
  }
  return m;
}

PairSet pair_set(const Design& d, const Placement* p, double radius) {
  PairSet ps;
  int m = int(d.nets.size());
  bool filtered = std::isfinite(radius);
  std::vector<double> lox(m), loy(m), hix(m), hiy(m);
  if (filtered) {
    if (!p) throw std::invalid_argument("pair_set: filter needs a placement");
    for (int e = 0; e < m; ++e) {
      double lx = 1e300, ly = 1e300, hx = -1e300, hy = -1e300;
      for (const auto& ref : d.nets[e].pins) {
        Point pt = pin_position(*p, d, ref.comp, ref.pin);
        lx = std::min(lx, pt.x);
        ly = std::min(ly, pt.y);
        hx = std::max(hx, pt.x);
        hy = std::max(hy, pt.y);
      }
      lox[e] = lx - radius;
      loy[e] = ly - radius;
      hix[e] = hx + radius;
      hiy[e] = hy + radius;
    }
  }
  for (int a = 0; a < m; ++a) {
    if (d.nets[a].pins.empty()) continue;
    for (int b = a + 1; b < m; ++b) {
      if (d.nets[b].pins.empty()) continue;
      if (filtered) {
        if (lox[a] > hix[b] || lox[b] > hix[a] || loy[a] > hiy[b] ||
            loy[b] > hiy[a])
          continue;
      }
      ps.pairs.push_back({a, b});
    }
  }
  return ps;
}

double separator_residual(const PinMatrix& e, const PinMatrix& ep, double ux,
                          double uy, double gamma) {
  double sq_e = 0, sq_p = 0;
  for (const auto& a : e.rows) {
    double v = (gamma + 1.0) - (a.x * ux + a.y * uy);
    if (v > 0) sq_e += v * v;
  }
  for (const auto& b : ep.rows) {
    double v = (b.x * ux + b.y * uy) - (gamma - 1.0);
    if (v > 0) sq_p += v * v;
  }
  return std::sqrt(sq_e) + std::sqrt(sq_p);
}

double separator_best_gamma(const PinMatrix& e, const PinMatrix& ep, double ux,
                            double uy) {
  double lo = 1e300, hi = -1e300;
  for (const auto& a : e.rows) {
    double v = a.x * ux + a.y * uy;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  for (const auto& b : ep.rows) {
    double v = b.x * ux + b.y * uy;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (lo > hi) return 0;
  lo -= 2.0;
  hi += 2.0;
  // Ternary search; the residual is convex in gamma.
  for (int it = 0; it < 200 && hi - lo > 1e-13 * (1.0 + std::abs(hi)); ++it) {
    double m1 = lo + (hi - lo) / 3.0;
    double m2 = hi - (hi - lo) / 3.0;
    if (separator_residual(e, ep, ux, uy, m1) <=
        separator_residual(e, ep, ux, uy, m2))
      hi = m2;
    else
      lo = m1;
  }
  return 0.5 * (lo + hi);
}

namespace {

struct SmoothEval {
  double value;     // smoothed objective
  double gx, gy, gg;  // gradient wrt (ux, uy, gamma)
};

// sqrt(||hinge_e||^2 + eps^2) + sqrt(||hinge_ep||^2 + eps^2) - 2 eps.
SmoothEval eval_smooth(const PinMatrix& e, const PinMatrix& ep, double ux,
                       double uy, double gamma, double eps) {
  double sq_e = 0, sq_p = 0;
  double dex = 0, dey = 0, deg = 0;  // d(sq_e)/d(u,gamma) halves
  double dpx = 0, dpy = 0, dpg = 0;
  for (const auto& a : e.rows) {
    double v = (gamma + 1.0) - (a.x * ux + a.y * uy);
    if (v > 0) {
      sq_e += v * v;
      dex -= v * a.x;
      dey -= v * a.y;
      deg += v;
    }
  }
  for (const auto& b : ep.rows) {
    double v = (b.x * ux + b.y * uy) - (gamma - 1.0);
    if (v > 0) {
      sq_p += v * v;
      dpx += v * b.x;
      dpy += v * b.y;
      dpg -= v;
    }
  }
  double re = std::sqrt(sq_e + eps * eps);
  double rp = std::sqrt(sq_p + eps * eps);
  SmoothEval out;
  out.value = re + rp - 2.0 * eps;
  out.gx = dex / re + dpx / rp;
  out.gy = dey / re + dpy / rp;
  out.gg = deg / re + dpg / rp;
  return out;
}

struct Candidate {
  double ux, uy, gamma, f;
};

void consider(const PinMatrix& e, const PinMatrix& ep, double ux, double uy,
              Candidate& best) {
  double g = separator_best_gamma(e, ep, ux, uy);
  double f = separator_residual(e, ep, ux, uy, g);
  if (f < best.f) best = {ux, uy, g, f};
}

// Damped gradient descent on the smoothed objective with an epsilon
// continuation schedule; tracks the best true residual seen.
void descend(const PinMatrix& e, const PinMatrix& ep, double ux, double uy,
             double gamma, int stage_iters, Candidate& best) {
  static const double kEps[] = {1e-1, 1e-3, 1e-5, 1e-7, 1e-9};
  for (double eps : kEps) {
    double step = 1.0;
    SmoothEval cur = eval_smooth(e, ep, ux, uy, gamma, eps);
    for (int it = 0; it < stage_iters; ++it) {
      double gn = cur.gx * cur.gx + cur.gy * cur.gy + cur.gg * cur.gg;
      if (gn < 1e-24 * (1.0 + cur.value * cur.value)) break;
      bool moved = false;
      for (int bt = 0; bt < 45; ++bt) {
        double nx = ux - step * cur.gx;
        double ny = uy - step * cur.gy;
        double ng = gamma - step * cur.gg;
        SmoothEval nxt = eval_smooth(e, ep, nx, ny, ng, eps);
        if (nxt.value <= cur.value - 1e-4 * step * gn) {
          ux = nx;
          uy = ny;
          gamma = ng;
          cur = nxt;
          step *= 1.6;
          moved = true;
          break;
        }
        step *= 0.5;
      }
      if (!moved) break;
    }
    // Exact gamma refit against the true (unsmoothed) residual.
    double gexact = separator_best_gamma(e, ep, ux, uy);
    double f = separator_residual(e, ep, ux, uy, gexact);
    if (f < best.f) best = {ux, uy, gexact, f};
    gamma = gexact;
    if (best.f < 1e-12) return;
  }
  // Coordinate polish on the true residual: alternate a subgradient ray
  // search in u with exact gamma solves. f is convex along any ray.
  for (int round = 0; round < 30; ++round) {
    SmoothEval g = eval_smooth(e, ep, best.ux, best.uy, best.gamma, 1e-12);
    double norm = std::hypot(g.gx, g.gy);
    if (norm < 1e-14) break;
    double dx = -g.gx / norm, dy = -g.gy / norm;
    double lo = 0, hi = 1.0;
    auto ray = [&](double t) {
      double ux2 = best.ux + t * dx, uy2 = best.uy + t * dy;
      double gg = separator_best_gamma(e, ep, ux2, uy2);
      return separator_residual(e, ep, ux2, uy2, gg);
    };
    while (hi < 1e4 && ray(hi * 2) < ray(hi)) hi *= 2;
    for (int it = 0; it < 80; ++it) {
      double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
      if (ray(m1) <= ray(m2))
        hi = m2;
      else
        lo = m1;
    }
    double t = 0.5 * (lo + hi);
    double prev = best.f;
    consider(e, ep, best.ux + t * dx, best.uy + t * dy, best);
    if (best.f > prev - 1e-12) break;
  }
}

}  // namespace

Separator solve_separator(const PinMatrix& e, const PinMatrix& ep,
                          const Separator* warm, const SeparatorOptions& opts) {
  if (e.rows.empty() && ep.rows.empty())
    throw std::invalid_argument("solve_separator: both nets empty");
  if (opts.solve_counter) ++*opts.solve_counter;

  // Center the joint pin cloud; the residual is translation invariant and
  // the solve conditions much better near the origin.
  double cx = 0, cy = 0;
  size_t total = e.rows.size() + ep.rows.size();
  for (const auto& a : e.rows) { cx += a.x; cy += a.y; }
  for (const auto& b : ep.rows) { cx += b.x; cy += b.y; }
  cx /= double(total);
  cy /= double(total);
  PinMatrix ce, cp;
  ce.rows.reserve(e.rows.size());
  cp.rows.reserve(ep.rows.size());
  for (const auto& a : e.rows) ce.rows.push_back({a.x - cx, a.y - cy});
  for (const auto& b : ep.rows) cp.rows.push_back({b.x - cx, b.y - cy});

  Candidate best{0, 0, 0, 1e300};
  consider(ce, cp, 0, 0, best);  // u = 0 baseline

  if (warm && warm->solved) {
    double wg = warm->gamma - (cx * warm->ux + cy * warm->uy);
    double f = separator_residual(ce, cp, warm->ux, warm->uy, wg);
    if (f < best.f) best = {warm->ux, warm->uy, wg, f};
    Candidate c = best;
    descend(ce, cp, best.ux, best.uy, best.gamma, opts.max_stage_iters, c);
    if (c.f < best.f) best = c;
  }

  if (opts.full_restarts || !(warm && warm->solved)) {
    double aex = 0, aey = 0, apx = 0, apy = 0;
    for (const auto& a : ce.rows) { aex += a.x; aey += a.y; }
    for (const auto& b : cp.rows) { apx += b.x; apy += b.y; }
    if (!ce.rows.empty()) { aex /= double(ce.rows.size()); aey /= double(ce.rows.size()); }
    if (!cp.rows.empty()) { apx /= double(cp.rows.size()); apy /= double(cp.rows.size()); }
    double dcx = aex - apx, dcy = aey - apy;
    double dn = std::hypot(dcx, dcy);
    std::vector<std::pair<double, double>> dirs = {
        {1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    if (dn > 1e-12) {
      dirs.push_back({dcx / dn, dcy / dn});
      dirs.push_back({-dcx / dn, -dcy / dn});
      dirs.push_back({-dcy / dn, dcx / dn});
      dirs.push_back({dcy / dn, -dcx / dn});
    } else {
      double s = std::sqrt(0.5);
      dirs.push_back({s, s});
      dirs.push_back({-s, s});
      dirs.push_back({s, -s});
      dirs.push_back({-s, -s});
    }
    for (const auto& [dx, dy] : dirs) {
      Candidate start{0, 0, 0, 1e300};
      for (int k = -6; k <= 6; ++k)
        consider(ce, cp, std::ldexp(dx, k), std::ldexp(dy, k), start);
      if (start.f < best.f) best = start;
      Candidate c = start;
      descend(ce, cp, start.ux, start.uy, start.gamma, opts.max_stage_iters, c);
      if (c.f < best.f) best = c;
      if (best.f < 1e-12) break;
    }
  }

  Separator s;
  s.ux = best.ux;
  s.uy = best.uy;
  s.gamma = best.gamma + (cx * best.ux + cy * best.uy);  // undo centering
  s.f = best.f;
  s.solved = true;
  return s;
}

double ns_cost(const Design& d, const Placement& p, const PairSet& pairs) {
  if (pairs.pairs.empty()) return 0;
  std::vector<PinMatrix> mats(d.nets.size());
  for (size_t e = 0; e < d.nets.size(); ++e)
    mats[e] = pin_matrix(d, d.nets[e], p);
  double sum = 0;
  for (const auto& pr : pairs.pairs)
    sum += solve_separator(mats[pr.e1], mats[pr.e2]).f;
  return sum / double(pairs.pairs.size());
}

std::pair<std::vector<Point>, std::vector<Point>> ns_gradient(
    const PinMatrix& e, const PinMatrix& ep, const Separator& s) {
  std::vector<Point> ge(e.rows.size()), gp(ep.rows.size());
  for (size_t i = 0; i < e.rows.size(); ++i) {
    const Point& a = e.rows[i];
    double v = (s.gamma + 1.0) - (a.x * s.ux + a.y * s.uy);
    if (v > 0) ge[i] = Point{-2.0 * v * s.ux, -2.0 * v * s.uy};
  }
  for (size_t j = 0; j < ep.rows.size(); ++j) {
    const Point& b = ep.rows[j];
    double v = (b.x * s.ux + b.y * s.uy) - (s.gamma - 1.0);
    if (v > 0) gp[j] = Point{2.0 * v * s.ux, 2.0 * v * s.uy};
  }
  return {std::move(ge), std::move(gp)};
}

}  // namespace nsplace
