#pragma once

#include <limits>
#include <vector>

#include "nsplace/lp.hpp"

namespace nsplace::bnb {

struct Config {
  double time_cap_s = 14400;  // 4 h
  double abs_gap = 1e-9;
  long node_limit = std::numeric_limits<long>::max() / 4;
};

enum class Status { kOptimal, kFeasibleTimeout, kInfeasible };

struct Incumbent {
  std::vector<double> x;
  double obj = 0;
  bool valid = false;
};

struct Result {
  Status status = Status::kInfeasible;
  std::vector<double> x;
  double obj = std::numeric_limits<double>::infinity();
  bool have_solution = false;
  long nodes = 0;          // LP relaxations solved
  double best_bound = -std::numeric_limits<double>::infinity();
};

// Depth-first dives with best-bound restarts; branches on the most
// fractional binary (ties to the lowest index). Child LPs re-solve dual from
// the parent basis. Fully deterministic apart from the wall-clock cap.
Result solve(const lp::Problem& p, const std::vector<int>& binary_cols,
             const Config& cfg, const Incumbent* warm = nullptr);

}  // namespace nsplace::bnb
