#pragma once

#include <string>
#include <vector>

#include "nsplace/design.hpp"
#include "nsplace/net_separation.hpp"

namespace nsplace {

struct ObjectiveConfig {
  double c = 1.0;            // wirelength smoothing parameter, mm
  double lambda_density = 1.0;
  double lambda_ns = 1.0;

  // c defaults to 1% of the larger board dimension.
  static ObjectiveConfig defaults(const Design& d);
};

struct WaResult {
  double value = 0;
  std::vector<Point> pin_grad;  // one entry per net pin, row order
};

// Weighted-average wirelength of one net with analytic pin gradients.
// Exponentials are max-shifted, so large coordinates do not overflow.
WaResult wa_wirelength(const Design& d, const Net& net, const Placement& p,
                       double c);

double hpwl_net(const Design& d, const Net& net, const Placement& p);

struct DensityGrid {
  int nx = 0, ny = 0;
  double bin_w = 0, bin_h = 0;
  double target = 0;  // average component area per bin

  int bins() const { return nx * ny; }
  double center_x(int bx) const { return (bx + 0.5) * bin_w; }
  double center_y(int by) const { return (by + 0.5) * bin_h; }

  // Square-ish bins with side near 2x the mean component dimension,
  // clipped so the grid has at least 2x2 bins and tiles the board exactly.
  static DensityGrid make(const Design& d, double bin_size = 0);
};

// Smoothed bell overlap between one bin and one component center.
double theta1d(double dist, double bin_extent);
double theta1d_deriv(double dist_signed, double bin_extent);
double bin_overlap(const DensityGrid& g, int bx, int by, const Design& d,
                   const Placement& p, int comp);

struct DensityResult {
  double value = 0;
  std::vector<Point> comp_grad;          // per component
  std::vector<double> normalization;     // C_i at the evaluated position
};

// D = sum_b (D_b - target)^2 with D_b = sum_i C_i Theta_x Theta_y. The
// normalization C_i is recomputed at the current position and treated as a
// constant in the gradient; pass frozen_norm to reuse a previous C.
DensityResult density_cost(const Design& d, const Placement& p,
                           const DensityGrid& g,
                           const std::vector<double>* frozen_norm = nullptr);

struct ObjectiveTerms {
  double wa = 0;
  double ns = 0;       // pair-averaged separator residual (norm form)
  double density = 0;
  double total = 0;
};

// Evaluates the composite objective over a placement snapshot and keeps the
// per-pair separator cache warm between calls.
class ObjectiveEvaluator {
 public:
  ObjectiveEvaluator(const Design& d, const ObjectiveConfig& cfg,
                     const PairSet& pairs, const DensityGrid& grid,
                     int threads = 1);

  // Refreshes net pin matrices and (when lambda_ns > 0) separators.
  ObjectiveTerms evaluate(const Placement& p);

  // Pin-level gradient of Wa + lambda_ns * Ns at the last evaluated
  // placement, plus the density component gradient. Call after evaluate().
  void accumulate_pin_gradients(std::vector<Point>& pin_grad) const;
  const DensityResult& density() const { return density_; }
  const std::vector<Separator>& separators() const { return separators_; }
  const PairSet& pairs() const { return pairs_; }
  long separator_solves() const { return separator_solves_; }
  const ObjectiveConfig& config() const { return cfg_; }

 private:
  const Design& d_;
  ObjectiveConfig cfg_;
  PairSet pairs_;
  DensityGrid grid_;
  int threads_;
  std::vector<PinMatrix> mats_;
  std::vector<WaResult> wa_;
  std::vector<Separator> separators_;
  std::vector<double> pair_f_prev_;
  DensityResult density_;
  long separator_solves_ = 0;
  bool first_eval_ = true;
};

// F = sum_e Wa(e) + lambda_ns * Ns + lambda_d * D (single-shot evaluation).
ObjectiveTerms total_objective(const Design& d, const Placement& p,
                               const ObjectiveConfig& cfg,
                               const PairSet& pairs, const DensityGrid& grid);

}  // namespace nsplace
