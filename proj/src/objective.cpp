#include "nsplace/objective.hpp"

#include <algorithm>
#include <cmath>

#include "nsplace/util.hpp"

namespace nsplace {

ObjectiveConfig ObjectiveConfig::defaults(const Design& d) {
  ObjectiveConfig cfg;
  cfg.c = 0.01 * std::max(d.board.width, d.board.height);
  if (cfg.c <= 0) cfg.c = 1.0;
  return cfg;
}

WaResult wa_wirelength(const Design& d, const Net& net, const Placement& p,
                       double c) {
  WaResult out;
  size_t k = net.pins.size();
  out.pin_grad.assign(k, Point{});
  if (k <= 1) return out;

  std::vector<Point> pos(k);
  for (size_t i = 0; i < k; ++i)
    pos[i] = pin_position(p, d, net.pins[i].comp, net.pins[i].pin);

  // One axis of the weighted-average model: weighted max minus weighted min.
  auto axis = [&](auto coord, auto grad_coord) {
    double mx = -1e300, mn = 1e300;
    for (size_t i = 0; i < k; ++i) {
      mx = std::max(mx, coord(i));
      mn = std::min(mn, coord(i));
    }
    double sp = 0, tp = 0, sm = 0, tm = 0;
    for (size_t i = 0; i < k; ++i) {
      double v = coord(i);
      double epw = std::exp((v - mx) / c);
      double emw = std::exp(-(v - mn) / c);
      sp += epw;
      tp += v * epw;
      sm += emw;
      tm += v * emw;
    }
    double wmax = tp / sp;
    double wmin = tm / sm;
    for (size_t i = 0; i < k; ++i) {
      double v = coord(i);
      double epw = std::exp((v - mx) / c);
      double emw = std::exp(-(v - mn) / c);
      double g = epw / sp * (1.0 + (v - wmax) / c) -
                 emw / sm * (1.0 - (v - wmin) / c);
      grad_coord(i, g);
    }
    return wmax - wmin;
  };
  out.value =
      axis([&](size_t i) { return pos[i].x; },
           [&](size_t i, double g) { out.pin_grad[i].x = g; }) +
      axis([&](size_t i) { return pos[i].y; },
           [&](size_t i, double g) { out.pin_grad[i].y = g; });
  return out;
}

double hpwl_net(const Design& d, const Net& net, const Placement& p) {
  if (net.pins.size() <= 1) return 0;
  double lx = 1e300, ly = 1e300, hx = -1e300, hy = -1e300;
  for (const auto& ref : net.pins) {
    Point pt = pin_position(p, d, ref.comp, ref.pin);
    lx = std::min(lx, pt.x);
    hx = std::max(hx, pt.x);
    ly = std::min(ly, pt.y);
    hy = std::max(hy, pt.y);
  }
  return (hx - lx) + (hy - ly);
}

DensityGrid DensityGrid::make(const Design& d, double bin_size) {
  DensityGrid g;
  double side = bin_size;
  if (side <= 0) {
    double sum = 0;
    int cnt = 0;
    for (const auto& c : d.components) {
      sum += c.width + c.height;
      cnt += 2;
    }
    side = cnt ? 2.0 * sum / cnt : std::max(d.board.width, d.board.height) / 4;
  }
  g.nx = std::max(2, int(std::lround(d.board.width / side)));
  g.ny = std::max(2, int(std::lround(d.board.height / side)));
  g.bin_w = d.board.width / g.nx;
  g.bin_h = d.board.height / g.ny;
  double area = 0;
  for (const auto& c : d.components) area += c.width * c.height;
  g.target = area / g.bins();
  return g;
}

double theta1d(double dist, double wb) {
  double dx = std::abs(dist);
  if (dx <= 0.5 * wb) return 1.0 - 2.0 * dx * dx / (wb * wb);
  if (dx <= wb) return 2.0 * (dx - wb) * (dx - wb) / (wb * wb);
  return 0.0;
}

double theta1d_deriv(double dist_signed, double wb) {
  double dx = std::abs(dist_signed);
  double s = dist_signed >= 0 ? 1.0 : -1.0;
  if (dx <= 0.5 * wb) return s * (-4.0 * dx / (wb * wb));
  if (dx <= wb) return s * (4.0 * (dx - wb) / (wb * wb));
  return 0.0;
}

double bin_overlap(const DensityGrid& g, int bx, int by, const Design& d,
                   const Placement& p, int comp) {
  Rect fp = footprint(d, p, comp);
  double cx = fp.x + 0.5 * fp.w;
  double cy = fp.y + 0.5 * fp.h;
  return theta1d(cx - g.center_x(bx), g.bin_w) *
         theta1d(cy - g.center_y(by), g.bin_h);
}

DensityResult density_cost(const Design& d, const Placement& p,
                           const DensityGrid& g,
                           const std::vector<double>* frozen_norm) {
  int n = int(d.components.size());
  int nb = g.bins();
  DensityResult out;
  out.comp_grad.assign(n, Point{});
  out.normalization.assign(n, 0);
  if (n == 0 || nb == 0) return out;

  // Theta has support within one bin extent of the center; only a small
  // window of bins sees each component.
  std::vector<double> centers_x(n), centers_y(n);
  std::vector<int> bx0(n), bx1(n), by0(n), by1(n);
  for (int i = 0; i < n; ++i) {
    Rect fp = footprint(d, p, i);
    centers_x[i] = fp.x + 0.5 * fp.w;
    centers_y[i] = fp.y + 0.5 * fp.h;
    bx0[i] = std::max(0, int(std::floor((centers_x[i] - g.bin_w) / g.bin_w - 0.5)));
    bx1[i] = std::min(g.nx - 1,
                      int(std::ceil((centers_x[i] + g.bin_w) / g.bin_w - 0.5)));
    by0[i] = std::max(0, int(std::floor((centers_y[i] - g.bin_h) / g.bin_h - 0.5)));
    by1[i] = std::min(g.ny - 1,
                      int(std::ceil((centers_y[i] + g.bin_h) / g.bin_h - 0.5)));
    double sum = 0;
    for (int bx = bx0[i]; bx <= bx1[i]; ++bx)
      for (int by = by0[i]; by <= by1[i]; ++by)
        sum += theta1d(centers_x[i] - g.center_x(bx), g.bin_w) *
               theta1d(centers_y[i] - g.center_y(by), g.bin_h);
    double area = d.components[i].width * d.components[i].height;
    if (frozen_norm) {
      out.normalization[i] = (*frozen_norm)[i];
    } else {
      out.normalization[i] = sum > 1e-12 ? area / sum : 0.0;
    }
  }

  std::vector<double> db(nb, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int bx = bx0[i]; bx <= bx1[i]; ++bx)
      for (int by = by0[i]; by <= by1[i]; ++by)
        db[bx * g.ny + by] += out.normalization[i] *
                              theta1d(centers_x[i] - g.center_x(bx), g.bin_w) *
                              theta1d(centers_y[i] - g.center_y(by), g.bin_h);
  }
  double val = 0;
  for (int b = 0; b < nb; ++b) {
    double r = db[b] - g.target;
    val += r * r;
  }
  out.value = val;

  for (int i = 0; i < n; ++i) {
    if (d.components[i].fixed) continue;
    double gx = 0, gy = 0;
    for (int bx = bx0[i]; bx <= bx1[i]; ++bx) {
      for (int by = by0[i]; by <= by1[i]; ++by) {
        double resid = db[bx * g.ny + by] - g.target;
        double tx = theta1d(centers_x[i] - g.center_x(bx), g.bin_w);
        double ty = theta1d(centers_y[i] - g.center_y(by), g.bin_h);
        double dtx = theta1d_deriv(centers_x[i] - g.center_x(bx), g.bin_w);
        double dty = theta1d_deriv(centers_y[i] - g.center_y(by), g.bin_h);
        gx += 2.0 * resid * out.normalization[i] * dtx * ty;
        gy += 2.0 * resid * out.normalization[i] * tx * dty;
      }
    }
    out.comp_grad[i] = Point{gx, gy};
  }
  return out;
}

ObjectiveEvaluator::ObjectiveEvaluator(const Design& d,
                                       const ObjectiveConfig& cfg,
                                       const PairSet& pairs,
                                       const DensityGrid& grid, int threads)
    : d_(d), cfg_(cfg), pairs_(pairs), grid_(grid), threads_(threads) {
  mats_.resize(d.nets.size());
  wa_.resize(d.nets.size());
  separators_.resize(pairs_.size());
  pair_f_prev_.assign(pairs_.size(), 1e300);
}

ObjectiveTerms ObjectiveEvaluator::evaluate(const Placement& p) {
  ObjectiveTerms t;
  for (size_t e = 0; e < d_.nets.size(); ++e) {
    mats_[e] = pin_matrix(d_, d_.nets[e], p);
    wa_[e] = wa_wirelength(d_, d_.nets[e], p, cfg_.c);
    t.wa += wa_[e].value;
  }
  if (cfg_.lambda_ns > 0 && !pairs_.pairs.empty()) {
    long solves = 0;
    std::vector<long> per_pair(pairs_.size(), 0);
    bool first = first_eval_;
    parallel_for(int(pairs_.size()), threads_, [&](int i) {
      const NetPair& pr = pairs_.pairs[i];
      SeparatorOptions opts;
      opts.solve_counter = &per_pair[i];
      opts.full_restarts = first;
      Separator prev = separators_[i];
      Separator s = solve_separator(mats_[pr.e1], mats_[pr.e2],
                                    prev.solved ? &prev : nullptr, opts);
      // Warm starts occasionally drift; redo with restarts when the residual
      // regresses noticeably.
      if (!first && prev.solved && s.f > 1.1 * pair_f_prev_[i] + 1e-9) {
        SeparatorOptions full;
        full.solve_counter = &per_pair[i];
        full.full_restarts = true;
        Separator s2 = solve_separator(mats_[pr.e1], mats_[pr.e2], &prev, full);
        if (s2.f < s.f) s = s2;
      }
      separators_[i] = s;
      pair_f_prev_[i] = s.f;
    });
    for (long c : per_pair) solves += c;
    separator_solves_ += solves;
    double sum = 0;
    for (const auto& s : separators_) sum += s.f;
    t.ns = sum / double(pairs_.size());
  }
  density_ = density_cost(d_, p, grid_);
  t.density = density_.value;
  t.total = t.wa + cfg_.lambda_ns * t.ns + cfg_.lambda_density * t.density;
  first_eval_ = false;
  return t;
}

void ObjectiveEvaluator::accumulate_pin_gradients(
    std::vector<Point>& pin_grad) const {
  pin_grad.assign(d_.total_pins(), Point{});
  for (size_t e = 0; e < d_.nets.size(); ++e) {
    const auto& mat = mats_[e];
    const auto& wa = wa_[e];
    for (size_t i = 0; i < mat.pin_slots.size(); ++i) {
      pin_grad[mat.pin_slots[i]].x += wa.pin_grad[i].x;
      pin_grad[mat.pin_slots[i]].y += wa.pin_grad[i].y;
    }
  }
  if (cfg_.lambda_ns > 0 && !pairs_.pairs.empty()) {
    double scale = cfg_.lambda_ns / double(pairs_.size());
    for (size_t m = 0; m < pairs_.size(); ++m) {
      const NetPair& pr = pairs_.pairs[m];
      auto [ge, gp] = ns_gradient(mats_[pr.e1], mats_[pr.e2], separators_[m]);
      const auto& se = mats_[pr.e1].pin_slots;
      const auto& sp = mats_[pr.e2].pin_slots;
      for (size_t i = 0; i < se.size(); ++i) {
        pin_grad[se[i]].x += scale * ge[i].x;
        pin_grad[se[i]].y += scale * ge[i].y;
      }
      for (size_t j = 0; j < sp.size(); ++j) {
        pin_grad[sp[j]].x += scale * gp[j].x;
        pin_grad[sp[j]].y += scale * gp[j].y;
      }
    }
  }
}

ObjectiveTerms total_objective(const Design& d, const Placement& p,
                               const ObjectiveConfig& cfg, const PairSet& pairs,
                               const DensityGrid& grid) {
  ObjectiveEvaluator ev(d, cfg, pairs, grid);
  return ev.evaluate(p);
}

}  // namespace nsplace
