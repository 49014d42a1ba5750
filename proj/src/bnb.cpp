#include "nsplace/bnb.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "nsplace/util.hpp"

namespace nsplace::bnb {

namespace {

constexpr double kIntTol = 1e-6;

struct Node {
  std::vector<std::pair<int, int>> fixes;  // (binary col, value) along path
  double bound;
  long seq;
  std::shared_ptr<lp::Basis> start_basis;  // parent's optimal basis
};

int most_fractional(const std::vector<double>& x,
                    const std::vector<int>& binaries) {
  int pick = -1;
  double best = kIntTol;
  for (int col : binaries) {
    double frac = std::min(x[col], 1.0 - x[col]);
    if (frac > best + 1e-12) {
      best = frac;
      pick = col;
    }
  }
  return pick;
}

}  // namespace

Result solve(const lp::Problem& p, const std::vector<int>& binary_cols,
             const Config& cfg, const Incumbent* warm) {
  Result out;
  Timer timer;
  lp::Simplex simplex(p);

  std::vector<double> lo0 = p.lo, hi0 = p.hi;
  Incumbent inc;
  if (warm && warm->valid) inc = *warm;

  std::vector<Node> open;
  long seq = 0;

  auto bounds_for = [&](const Node& nd, std::vector<double>& lo,
                        std::vector<double>& hi) {
    lo = lo0;
    hi = hi0;
    for (const auto& [col, val] : nd.fixes) {
      lo[col] = val;
      hi[col] = val;
    }
  };

  Node root;
  root.bound = -std::numeric_limits<double>::infinity();
  root.seq = seq++;
  open.push_back(std::move(root));

  bool budget_hit = false;
  int dive_from = -1;  // index into open to prefer (last pushed child)

  while (!open.empty()) {
    if (!budget_hit &&
        (out.nodes >= cfg.node_limit || timer.seconds() > cfg.time_cap_s)) {
      budget_hit = true;
    }
    if (budget_hit && inc.valid) break;
    if (budget_hit && out.nodes >= 4 * cfg.node_limit) break;

    // Node selection: dive when a child was just pushed, otherwise take the
    // best bound (ties to the oldest).
    size_t pick = 0;
    if (dive_from >= 0 && size_t(dive_from) < open.size()) {
      pick = size_t(dive_from);
    } else {
      for (size_t i = 1; i < open.size(); ++i) {
        if (open[i].bound < open[pick].bound - 1e-12 ||
            (open[i].bound < open[pick].bound + 1e-12 &&
             open[i].seq < open[pick].seq))
          pick = i;
      }
    }
    Node node = std::move(open[pick]);
    open.erase(open.begin() + pick);
    dive_from = -1;

    if (inc.valid && node.bound >= inc.obj - cfg.abs_gap) continue;

    std::vector<double> lo, hi;
    bounds_for(node, lo, hi);
    lp::Result rel;
    if (node.start_basis && node.start_basis->clean)
      rel = simplex.solve_dual(*node.start_basis, lo, hi);
    if (rel.status == lp::Status::kStalled) rel = simplex.solve_primal(lo, hi);
    ++out.nodes;

    if (rel.status == lp::Status::kInfeasible) continue;
    if (rel.status != lp::Status::kOptimal)
      throw std::runtime_error("node relaxation failed");
    if (inc.valid && rel.obj >= inc.obj - cfg.abs_gap) continue;

    int frac_col = most_fractional(rel.x, binary_cols);
    if (frac_col < 0) {
      // Integral: new incumbent.
      if (!inc.valid || rel.obj < inc.obj - 1e-12) {
        inc.valid = true;
        inc.obj = rel.obj;
        inc.x = rel.x;
        for (int col : binary_cols) inc.x[col] = std::round(inc.x[col]);
      }
      continue;
    }

    auto basis = std::make_shared<lp::Basis>(simplex.last_basis());
    if (open.size() > 20000) basis.reset();  // memory guard; re-solves primal
    int first_val = rel.x[frac_col] >= 0.5 ? 1 : 0;
    for (int k = 0; k < 2; ++k) {
      int val = k == 0 ? 1 - first_val : first_val;  // dive child pushed last
      Node child;
      child.fixes = node.fixes;
      child.fixes.push_back({frac_col, val});
      child.bound = rel.obj;
      child.seq = seq++;
      child.start_basis = basis;
      open.push_back(std::move(child));
    }
    dive_from = int(open.size()) - 1;
  }

  double open_bound = std::numeric_limits<double>::infinity();
  for (const auto& nd : open) open_bound = std::min(open_bound, nd.bound);

  if (inc.valid) {
    out.have_solution = true;
    out.x = inc.x;
    out.obj = inc.obj;
    out.status = open.empty() ? Status::kOptimal : Status::kFeasibleTimeout;
    out.best_bound = open.empty() ? inc.obj : std::min(open_bound, inc.obj);
    // Everything left was within the gap of the incumbent.
    if (!open.empty() && open_bound >= inc.obj - cfg.abs_gap)
      out.status = Status::kOptimal;
  } else {
    out.status = Status::kInfeasible;
    out.best_bound = open_bound;
    // Distinguish a proven empty tree from an exhausted budget upstream via
    // nodes vs. node_limit.
  }
  return out;
}

}  // namespace nsplace::bnb
