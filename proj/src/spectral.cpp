#include "nsplace/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace nsplace {

CliqueGraph clique_expand(const Design& d) {
  CliqueGraph g;
  g.n = int(d.components.size());
  g.adj.assign(size_t(g.n) * g.n, 0.0);
  g.degree.assign(g.n, 0.0);
  g.area.resize(g.n);
  for (int i = 0; i < g.n; ++i)
    g.area[i] = d.components[i].width * d.components[i].height;
  for (const auto& net : d.nets) {
    size_t k = net.pins.size();
    if (k < 2) continue;
    std::set<int> comps;
    for (const auto& ref : net.pins) comps.insert(ref.comp);
    if (comps.size() < 2) continue;  // self-loop only
    double w = 1.0 / double(k - 1);
    for (auto it = comps.begin(); it != comps.end(); ++it) {
      auto jt = it;
      for (++jt; jt != comps.end(); ++jt) {
        g.at(*it, *jt) += w;
        g.at(*jt, *it) += w;
      }
    }
  }
  for (int i = 0; i < g.n; ++i) {
    double s = 0;
    for (int j = 0; j < g.n; ++j) s += g.at(i, j);
    g.degree[i] = s;
  }
  return g;
}

std::vector<double> normalized_laplacian(const CliqueGraph& g) {
  int n = g.n;
  std::vector<double> L(size_t(n) * n, 0.0);
  std::vector<double> rs(n);
  for (int i = 0; i < n; ++i)
    rs[i] = g.degree[i] > 0 ? 1.0 / std::sqrt(g.degree[i]) : 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j)
      L[size_t(i) * n + j] = (i == j ? 1.0 : 0.0) - rs[i] * g.at(i, j) * rs[j];
    if (g.degree[i] <= 0) {
      for (int j = 0; j < n; ++j) L[size_t(i) * n + j] = (i == j ? 1.0 : 0.0);
      for (int j = 0; j < n; ++j) L[size_t(j) * n + i] = (i == j ? 1.0 : 0.0);
    }
  }
  return L;
}

namespace {

// Deflated power iteration on the shifted operator sigma*I - M, restricted
// to the subspace orthogonal to the given directions.
std::vector<double> smallest_eigvec(const std::vector<double>& M, int n,
                                    const std::vector<std::vector<double>>& defl,
                                    double tol, int max_iters) {
  double sigma = 0;
  for (int i = 0; i < n; ++i) {
    double row = 0;
    for (int j = 0; j < n; ++j) row += std::abs(M[size_t(i) * n + j]);
    sigma = std::max(sigma, row);
  }
  sigma += 1.0;

  auto project = [&](std::vector<double>& v) {
    for (const auto& q : defl) {
      double dot = 0;
      for (int i = 0; i < n; ++i) dot += v[i] * q[i];
      for (int i = 0; i < n; ++i) v[i] -= dot * q[i];
    }
  };
  auto normalize = [&](std::vector<double>& v) {
    double nn = 0;
    for (int i = 0; i < n; ++i) nn += v[i] * v[i];
    nn = std::sqrt(nn);
    if (nn < 1e-300) return false;
    for (int i = 0; i < n; ++i) v[i] /= nn;
    return true;
  };

  std::vector<double> v(n), w(n);
  for (int i = 0; i < n; ++i) v[i] = 1.0 / double(i + 1);  // deterministic
  project(v);
  if (!normalize(v)) {
    // Start vector lay entirely in the deflation space; perturb.
    for (int i = 0; i < n; ++i) v[i] = (i % 2 ? -1.0 : 1.0) / double(i + 1);
    project(v);
    if (!normalize(v)) throw std::runtime_error("eigensolver: degenerate start");
  }
  double prev_change = 1e300;
  for (int it = 0; it < max_iters; ++it) {
    for (int i = 0; i < n; ++i) {
      double s = 0;
      const double* row = &M[size_t(i) * n];
      for (int j = 0; j < n; ++j) s += row[j] * v[j];
      w[i] = sigma * v[i] - s;
    }
    project(w);
    if (!normalize(w))
      throw std::runtime_error("eigensolver: iterate vanished");
    double change = 0;
    for (int i = 0; i < n; ++i) change += (w[i] - v[i]) * (w[i] - v[i]);
    // Sign flips between iterates are convergence too.
    double flip = 0;
    for (int i = 0; i < n; ++i) flip += (w[i] + v[i]) * (w[i] + v[i]);
    change = std::min(change, flip);
    v = w;
    prev_change = std::sqrt(change);
    if (prev_change < tol) return v;
  }
  if (prev_change > std::sqrt(tol))
    throw std::runtime_error("eigensolver did not converge");
  return v;
}

}  // namespace

SpectralRaw spectral_raw_coordinates(const Design& d,
                                     const SpectralConfig& cfg) {
  SpectralRaw out;
  int n = int(d.components.size());
  out.x.assign(n, 0);
  out.y.assign(n, 0);
  if (n < 3) {
    out.fallback = true;
    return out;
  }
  CliqueGraph g = clique_expand(d);
  std::vector<double> L = normalized_laplacian(g);
  // Whiten by the area weights: M = V^{-1/2} L V^{-1/2}. The constraint
  // direction v^T x = 0 becomes orthogonality to sqrt(area).
  std::vector<double> isq(n), s(n);
  for (int i = 0; i < n; ++i) {
    double a = std::max(g.area[i], 1e-12);
    isq[i] = 1.0 / std::sqrt(a);
    s[i] = std::sqrt(a);
  }
  std::vector<double> M(size_t(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      M[size_t(i) * n + j] = isq[i] * L[size_t(i) * n + j] * isq[j];
  double sn = 0;
  for (int i = 0; i < n; ++i) sn += s[i] * s[i];
  sn = std::sqrt(sn);
  for (int i = 0; i < n; ++i) s[i] /= sn;

  std::vector<std::vector<double>> defl = {s};
  std::vector<double> z1 = smallest_eigvec(M, n, defl, cfg.tol, cfg.max_iters);
  defl.push_back(z1);
  std::vector<double> z2 = smallest_eigvec(M, n, defl, cfg.tol, cfg.max_iters);

  double scale1 = cfg.c1 > 0 ? std::sqrt(cfg.c1) : std::sqrt(double(n));
  double scale2 = cfg.c2 > 0 ? std::sqrt(cfg.c2) : std::sqrt(double(n));
  for (int i = 0; i < n; ++i) {
    out.x[i] = isq[i] * z1[i] * scale1;
    out.y[i] = isq[i] * z2[i] * scale2;
  }
  return out;
}

Placement spectral_coordinates(const Design& d, const SpectralConfig& cfg) {
  Placement p = Placement::zero(d);
  int n = int(d.components.size());
  const Board& b = d.board;
  SpectralRaw raw = spectral_raw_coordinates(d, cfg);

  auto center_all = [&]() {
    for (int i = 0; i < n; ++i) {
      if (d.components[i].fixed) continue;
      const Component& c = d.components[i];
      p.x[i] = 0.5 * (b.width - eff_width(c, 0));
      p.y[i] = 0.5 * (b.height - eff_height(c, 0));
      p.r[i] = 0;
    }
  };
  if (raw.fallback) {
    center_all();
    return p;
  }

  // Affine per-axis rescale: map the center bounding box onto the central
  // 80% of the board.
  auto rescale = [](std::vector<double>& v, double span, double margin) {
    double lo = *std::min_element(v.begin(), v.end());
    double hi = *std::max_element(v.begin(), v.end());
    if (hi - lo < 1e-12) {
      for (double& t : v) t = 0.5 * span;
      return;
    }
    double a = (span - 2 * margin) / (hi - lo);
    for (double& t : v) t = margin + (t - lo) * a;
  };
  rescale(raw.x, b.width, 0.1 * b.width);
  rescale(raw.y, b.height, 0.1 * b.height);

  for (int i = 0; i < n; ++i) {
    if (d.components[i].fixed) continue;
    const Component& c = d.components[i];
    double we = eff_width(c, 0), he = eff_height(c, 0);
    p.x[i] = std::clamp(raw.x[i] - 0.5 * we, 0.0, std::max(0.0, b.width - we));
    p.y[i] = std::clamp(raw.y[i] - 0.5 * he, 0.0, std::max(0.0, b.height - he));
    p.r[i] = 0;
  }
  return p;
}

Placement orientation_search(const Design& d, const Placement& seed,
                             const ObjectiveConfig& cfg, const PairSet& pairs,
                             const DensityGrid& grid, int threads) {
  int n = int(d.components.size());
  const Board& b = d.board;

  Placement best = seed;
  ObjectiveEvaluator seed_ev(d, cfg, pairs, grid, threads);
  double best_cost = seed_ev.evaluate(seed).total;

  for (int variant = 0; variant < 4; ++variant) {
    bool flip_x = variant & 1, flip_y = variant & 2;
    Placement cand = seed;
    for (int i = 0; i < n; ++i) {
      if (d.components[i].fixed) continue;
      const Component& c = d.components[i];
      if (flip_x) cand.x[i] = b.width - cand.x[i] - eff_width(c, cand.r[i]);
      if (flip_y) cand.y[i] = b.height - cand.y[i] - eff_height(c, cand.r[i]);
    }
    ObjectiveEvaluator ev(d, cfg, pairs, grid, threads);
    double cost = ev.evaluate(cand).total;
    // Greedy sweep: orient each movable component with the others fixed.
    for (int i = 0; i < n; ++i) {
      if (d.components[i].fixed) continue;
      cand.r[i] = 0;
      clamp_into_board(d, cand, i);
      double c0 = ev.evaluate(cand).total;
      cand.r[i] = 1;
      clamp_into_board(d, cand, i);
      double c1 = ev.evaluate(cand).total;
      if (c0 <= c1) {
        cand.r[i] = 0;
        clamp_into_board(d, cand, i);
        cost = c0;
      } else {
        cand.r[i] = 1;
        cost = c1;
      }
    }
    if (cost < best_cost - 1e-12) {
      best_cost = cost;
      best = cand;
    }
  }
  return best;
}

}  // namespace nsplace
