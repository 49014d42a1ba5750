#pragma once

#include <cstdint>
#include <string>

#include "nsplace/design.hpp"

namespace nsplace {

struct GenParams {
  int num_components = 10;
  int num_nets = 12;
  double board_w = 30, board_h = 30;
  uint64_t seed = 1;
  double utilization = 0.5;   // component area target as a board fraction
  double min_dim = 1.0, max_dim = 4.0;  // pre-scale footprint range
  int num_fixed = 0;
  int min_net_pins = 2, max_net_pins = 6;
};

// Random rectangles (log-uniform dims rescaled to the utilization target),
// perimeter pins, nets drawn by preferential attachment over components.
// Deterministic in (params, seed).
Design generate_design(const GenParams& params);

}  // namespace nsplace
