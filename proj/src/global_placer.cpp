#include "nsplace/global_placer.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace nsplace {

std::vector<Point> component_update_matrix(const Design& d,
                                           const std::vector<Point>& pin_grad) {
  int n = int(d.components.size());
  std::vector<Point> out(n);
  for (int i = 0; i < n; ++i) {
    const auto& pins = d.components[i].pins;
    if (pins.empty()) continue;
    double sx = 0, sy = 0;
    for (size_t k = 0; k < pins.size(); ++k) {
      int slot = d.pin_slot(i, int(k));
      sx += pin_grad[slot].x;
      sy += pin_grad[slot].y;
    }
    out[i] = Point{sx / double(pins.size()), sy / double(pins.size())};
  }
  return out;
}

GlobalPlacer::GlobalPlacer(const Design& d, const ObjectiveConfig& obj_cfg,
                           const GpConfig& gp_cfg, const PairSet& pairs,
                           const DensityGrid& grid, const Placement& seed)
    : d_(d),
      cfg_(gp_cfg),
      ev_(d, obj_cfg, pairs, grid, gp_cfg.threads),
      cur_(seed),
      best_(seed) {
  vel_.assign(d.components.size(), Point{});
}

ObjectiveTerms GlobalPlacer::step() {
  // Separators refreshed with positions frozen; F at the current iterate.
  ObjectiveTerms t = ev_.evaluate(cur_);
  if (!have_best_ || t.total < best_f_) {
    best_f_ = t.total;
    best_ = cur_;
    have_best_ = true;
  }

  std::vector<Point> pin_grad;
  ev_.accumulate_pin_gradients(pin_grad);
  std::vector<Point> update = component_update_matrix(d_, pin_grad);
  const auto& dens = ev_.density().comp_grad;
  double ld = ev_.config().lambda_density;

  for (size_t i = 0; i < d_.components.size(); ++i) {
    if (d_.components[i].fixed) {
      vel_[i] = Point{};
      continue;
    }
    double gx = ld * dens[i].x + update[i].x;
    double gy = ld * dens[i].y + update[i].y;
    if (!std::isfinite(gx) || !std::isfinite(gy))
      throw std::runtime_error("non-finite gradient for component '" +
                               d_.components[i].id + "'");
    vel_[i].x = cfg_.beta * vel_[i].x - cfg_.alpha * gx;
    vel_[i].y = cfg_.beta * vel_[i].y - cfg_.alpha * gy;
    cur_.x[i] += vel_[i].x;
    cur_.y[i] += vel_[i].y;
    clamp_into_board(d_, cur_, int(i));
  }
  return t;
}

Placement run_global_placement(const Design& d, const Placement& seed,
                               const ObjectiveConfig& obj_cfg,
                               const GpConfig& gp_cfg, GpStats* stats,
                               const PairSet* pairs_in) {
  PairSet pairs;
  if (pairs_in)
    pairs = *pairs_in;
  else
    pairs = pair_set(d, &seed);
  DensityGrid grid = DensityGrid::make(d);
  GlobalPlacer placer(d, obj_cfg, gp_cfg, pairs, grid, seed);

  std::FILE* trace = nullptr;
  if (!gp_cfg.trace_path.empty()) {
    trace = std::fopen(gp_cfg.trace_path.c_str(), "w");
    if (!trace)
      throw std::runtime_error("cannot open trace file " + gp_cfg.trace_path);
    std::fprintf(trace, "# iter F wa ns d\n");
  }

  double prev_f = 0;
  int calm = 0;
  int it = 0;
  for (; it < gp_cfg.max_iters; ++it) {
    ObjectiveTerms t = placer.step();
    if (trace)
      std::fprintf(trace, "%d %.10g %.10g %.10g %.10g\n", it, t.total, t.wa,
                   t.ns, t.density);
    if (it == 0) {
      if (stats) stats->seed_objective = t.total;
    } else {
      double rel = std::abs(t.total - prev_f) / std::max(std::abs(prev_f), 1e-30);
      calm = rel < gp_cfg.tol ? calm + 1 : 0;
      if (calm >= gp_cfg.window) {
        ++it;
        break;
      }
    }
    prev_f = t.total;
  }
  // Consider the final iterate for the incumbent too.
  if (gp_cfg.max_iters > 0) {
    ObjectiveTerms t = placer.step();
    if (trace)
      std::fprintf(trace, "%d %.10g %.10g %.10g %.10g\n", it, t.total, t.wa,
                   t.ns, t.density);
  }
  if (trace) std::fclose(trace);

  if (stats) {
    stats->iterations = it;
    stats->separator_solves = placer.separator_solves();
    stats->best_objective = placer.best_objective();
  }
  return gp_cfg.max_iters > 0 ? placer.best() : seed;
}

}  // namespace nsplace
