#include "nsplace/synth.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nsplace/util.hpp"

namespace nsplace {

namespace {

double round_mm(double v) { return std::round(v * 100.0) / 100.0; }

}  // namespace

Design generate_design(const GenParams& prm) {
  if (prm.num_components < 1 || prm.num_nets < 0)
    throw std::invalid_argument("generator needs positive counts");
  Rng rng(prm.seed);
  Design d;
  d.board.width = prm.board_w;
  d.board.height = prm.board_h;
  d.board.num_layers = 2;

  std::vector<double> ws(prm.num_components), hs(prm.num_components);
  double raw_area = 0;
  for (int i = 0; i < prm.num_components; ++i) {
    ws[i] = rng.log_uniform(prm.min_dim, prm.max_dim);
    hs[i] = rng.log_uniform(prm.min_dim, prm.max_dim);
    raw_area += ws[i] * hs[i];
  }
  double target_area = prm.utilization * prm.board_w * prm.board_h;
  double scale = std::sqrt(target_area / raw_area);
  for (int i = 0; i < prm.num_components; ++i) {
    ws[i] = std::max(0.02, round_mm(ws[i] * scale));
    hs[i] = std::max(0.02, round_mm(hs[i] * scale));
    if (ws[i] > prm.board_w || hs[i] > prm.board_h)
      throw std::runtime_error(
          "cannot satisfy utilization target: component exceeds board");
  }

  for (int i = 0; i < prm.num_components; ++i) {
    Component c;
    c.id = "U" + std::to_string(i);
    c.width = ws[i];
    c.height = hs[i];
    d.components.push_back(std::move(c));
  }

  // Fixed components pack along the bottom edge.
  double fx = 0.5;
  for (int i = 0; i < std::min(prm.num_fixed, prm.num_components); ++i) {
    Component& c = d.components[i];
    if (fx + c.width > prm.board_w) break;
    c.fixed = true;
    c.fx = round_mm(fx);
    c.fy = 0.5;
    c.fr = 0;
    fx += c.width + 1.0;
  }

  // A pin on the footprint perimeter, sides weighted by length.
  auto add_pin = [&](int ci) {
    Component& c = d.components[ci];
    double per = 2 * (c.width + c.height);
    double t = rng.uniform() * per;
    double ox, oy;
    if (t < c.width) { ox = t; oy = 0; }
    else if (t < c.width + c.height) { ox = c.width; oy = t - c.width; }
    else if (t < 2 * c.width + c.height) { ox = t - c.width - c.height; oy = c.height; }
    else { ox = 0; oy = t - 2 * c.width - c.height; }
    PinDef pd;
    pd.id = "p" + std::to_string(c.pins.size());
    pd.ox = std::clamp(round_mm(ox), 0.0, c.width);
    pd.oy = std::clamp(round_mm(oy), 0.0, c.height);
    c.pins.push_back(pd);
    return int(c.pins.size()) - 1;
  };

  std::vector<int> incidence(prm.num_components, 0);
  for (int e = 0; e < prm.num_nets; ++e) {
    int want = rng.range(prm.min_net_pins, prm.max_net_pins);
    want = std::min(want, prm.num_components);
    // Preferential attachment without replacement.
    std::vector<int> chosen;
    std::vector<bool> used(prm.num_components, false);
    for (int k = 0; k < want; ++k) {
      double total = 0;
      for (int i = 0; i < prm.num_components; ++i)
        if (!used[i]) total += 1.0 + incidence[i];
      double pickw = rng.uniform() * total;
      int pick = -1;
      for (int i = 0; i < prm.num_components; ++i) {
        if (used[i]) continue;
        pickw -= 1.0 + incidence[i];
        if (pickw <= 0) { pick = i; break; }
      }
      if (pick < 0)
        for (int i = prm.num_components - 1; i >= 0 && pick < 0; --i)
          if (!used[i]) pick = i;
      used[pick] = true;
      chosen.push_back(pick);
    }
    Net net;
    net.id = "n" + std::to_string(e);
    for (int ci : chosen) {
      ++incidence[ci];
      net.pins.push_back({ci, add_pin(ci)});
    }
    d.nets.push_back(std::move(net));
  }
  // Components never drawn into a net still get one pin so footprints have
  // geometry to render.
  for (int i = 0; i < prm.num_components; ++i)
    if (d.components[i].pins.empty()) add_pin(i);

  d.finalize();
  return d;
}

}  // namespace nsplace
