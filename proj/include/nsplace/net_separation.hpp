#pragma once

#include <limits>
#include <utility>
#include <vector>

#include "nsplace/design.hpp"

namespace nsplace {

// Stacked 2-D pin coordinates of one net; row i is pin i. pin_slots maps
// rows back to the design's flat pin indexing for gradient scatter.
struct PinMatrix {
  std::vector<Point> rows;
  std::vector<int> pin_slots;
};

PinMatrix pin_matrix(const Design& d, const Net& net, const Placement& p);

// Hyperplane {a : a.u = gamma} with residual f of the two-sided hinge
// objective; f = 0 certifies separation with unit margin on both sides.
struct Separator {
  double ux = 0, uy = 0, gamma = 0;
  double f = 0;
  bool solved = false;
};

struct NetPair {
  int e1 = -1, e2 = -1;
};

struct PairSet {
  std::vector<NetPair> pairs;
  size_t size() const { return pairs.size(); }
};

// All unordered pairs of distinct nets, optionally filtered to pairs whose
// pin bounding boxes inflated by `radius` intersect. Zero-pin nets are
// skipped. `p` may be null when radius is infinite.
PairSet pair_set(const Design& d, const Placement* p,
                 double radius = std::numeric_limits<double>::infinity());

struct SeparatorOptions {
  bool full_restarts = true;  // 8 deterministic starts; else warm-start only
  int max_stage_iters = 300;
  long* solve_counter = nullptr;
};

// Minimizes f(u, gamma) = ||(-A u + (g+1)1)+||2 + ||(B u - (g-1)1)+||2.
// Net e takes the positive side. Throws if both nets are empty.
Separator solve_separator(const PinMatrix& e, const PinMatrix& ep,
                          const Separator* warm = nullptr,
                          const SeparatorOptions& opts = {});

// Pair-averaged residual with fresh full-restart solves; 0 for empty sets.
double ns_cost(const Design& d, const Placement& p, const PairSet& pairs);

// Squared-hinge per-pin gradients at the frozen separator: for rows of e
// (positive side) -2 max(0, (g+1) - a.u) u, for rows of ep
// +2 max(0, a.u - (g-1)) u.
std::pair<std::vector<Point>, std::vector<Point>> ns_gradient(
    const PinMatrix& e, const PinMatrix& ep, const Separator& s);

// Exact minimization of f over gamma for a fixed u (convex 1-D problem).
double separator_best_gamma(const PinMatrix& e, const PinMatrix& ep, double ux,
                            double uy);
double separator_residual(const PinMatrix& e, const PinMatrix& ep, double ux,
                          double uy, double gamma);

}  // namespace nsplace
