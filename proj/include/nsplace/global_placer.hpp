#pragma once

#include <memory>
#include <string>
#include <vector>

#include "nsplace/objective.hpp"

namespace nsplace {

struct GpConfig {
  double alpha = 1e-3;       // learning rate
  double beta = 0.9;         // momentum
  int max_iters = 5000;
  double tol = 1e-4;         // relative objective change
  int window = 20;           // consecutive iterations below tol
  int threads = 1;
  std::string trace_path;    // optional "iter F wa ns d" trace
};

// Per-component update: the mean of the component's pin gradients.
// Components without pins get zero.
std::vector<Point> component_update_matrix(const Design& d,
                                           const std::vector<Point>& pin_grad);

struct GpStats {
  int iterations = 0;
  long separator_solves = 0;
  double seed_objective = 0;
  double best_objective = 0;
  ObjectiveTerms best_terms;
};

// One alternating-minimization step over the composite objective: refresh
// separators at frozen positions, accumulate pin gradients, form the
// component update, apply a momentum step, clamp into the board.
class GlobalPlacer {
 public:
  GlobalPlacer(const Design& d, const ObjectiveConfig& obj_cfg,
               const GpConfig& gp_cfg, const PairSet& pairs,
               const DensityGrid& grid, const Placement& seed);

  // Evaluates F at the current placement (updating the incumbent), then
  // moves. Returns the objective terms at the pre-move placement.
  ObjectiveTerms step();

  const Placement& current() const { return cur_; }
  const Placement& best() const { return best_; }
  double best_objective() const { return best_f_; }
  long separator_solves() const { return ev_.separator_solves(); }
  const std::vector<Point>& velocity() const { return vel_; }

 private:
  const Design& d_;
  GpConfig cfg_;
  ObjectiveEvaluator ev_;
  Placement cur_, best_;
  std::vector<Point> vel_;
  double best_f_ = 0;
  bool have_best_ = false;
};

Placement run_global_placement(const Design& d, const Placement& seed,
                               const ObjectiveConfig& obj_cfg,
                               const GpConfig& gp_cfg, GpStats* stats = nullptr,
                               const PairSet* pairs = nullptr);

}  // namespace nsplace
