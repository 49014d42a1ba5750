#pragma once

#include <string>
#include <vector>

#include "nsplace/bnb.hpp"
#include "nsplace/design.hpp"
#include "nsplace/lp.hpp"

namespace nsplace {

enum class RelDir { kLeft, kRight, kUnder, kOver };

// Frozen relative order for one component pair; prunes that pair's
// disjunction binaries from the MILP.
struct RelConstraint {
  int i = -1, j = -1;  // i < j, design component indices
  RelDir dir = RelDir::kLeft;
};

// Pairs whose boundary-to-boundary gap (larger axis) meets the threshold k
// keep their current relative order; ties pick the horizontal axis.
// Fixed-fixed pairs are skipped.
std::vector<RelConstraint> derive_relative_constraints(const Placement& p,
                                                       const Design& d,
                                                       double k);

struct PairVars {
  int i = -1, j = -1;
  int p_col = -1, q_col = -1;
};

struct MilpModel {
  lp::Problem prob;
  std::vector<std::string> names;     // per column
  std::vector<int> binaries;          // binary column indices
  std::vector<int> x_col, y_col, r_col;  // r_col = -1 for fixed components
  std::vector<PairVars> pairs;        // pairs that kept their binaries
  std::vector<RelConstraint> rels;
  const Design* design = nullptr;
};

// Wirelength-minimal layout MILP: per-net bound variables, an hpwl range
// term, big-M non-overlap disjunctions (M = board W/H), boundary rows and
// linear-in-r pin positions.
MilpModel build_model(const Design& d, const std::vector<RelConstraint>& rels);

struct BnbConfig {
  double time_cap_s = 14400;
  double abs_gap = 1e-9;
  long node_limit = std::numeric_limits<long>::max() / 4;
};

enum class MilpStatus { kOptimal, kFeasibleTimeout, kInfeasible };

struct MilpResult {
  Placement placement;
  MilpStatus status = MilpStatus::kInfeasible;
  bool have_solution = false;
  double objective = 0;
  long nodes = 0;
  double best_bound = 0;
  bool budget_exhausted = false;
};

MilpResult solve_milp(const MilpModel& m, const BnbConfig& cfg,
                      const Placement* warm = nullptr);

// CPLEX-LP text of the model.
std::string export_lp(const MilpModel& m);

// Reads `var value` lines produced by an external solver against the
// exported model's names; returns the decoded placement.
Placement import_solution(const Design& d, const std::string& text);

struct LegalizeResult {
  Placement placement;
  MilpStatus status = MilpStatus::kInfeasible;
  long nodes = 0;
  double objective = 0;
  int num_rel_constraints = 0;
};

// derive_relative_constraints -> build_model -> solve_milp with the global
// placement as warm start. Throws when no feasible placement is found.
LegalizeResult legalize(const Design& d, const Placement& gp, double k,
                        const BnbConfig& cfg, bool use_rel_constraints = true);

}  // namespace nsplace
