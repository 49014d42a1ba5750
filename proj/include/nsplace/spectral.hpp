#pragma once

#include <vector>

#include "nsplace/design.hpp"
#include "nsplace/objective.hpp"

namespace nsplace {

// Clique-expanded component graph: each k-pin net contributes weight
// 1/(k-1) to every unordered pair of distinct incident components.
struct CliqueGraph {
  int n = 0;
  std::vector<double> adj;     // dense n*n, symmetric, zero diagonal
  std::vector<double> degree;  // row sums
  std::vector<double> area;    // w_i * h_i

  double& at(int i, int j) { return adj[size_t(i) * n + j]; }
  double at(int i, int j) const { return adj[size_t(i) * n + j]; }
};

CliqueGraph clique_expand(const Design& d);

// L = I - R^{-1/2} A R^{-1/2}; isolated nodes get an identity row.
std::vector<double> normalized_laplacian(const CliqueGraph& g);

struct SpectralConfig {
  // Scale constants of the quadratic constraints. They only set the scale
  // of the raw eigenvectors, which the board rescale overrides.
  double c1 = 0, c2 = 0, c3 = 0;  // 0 -> n at solve time
  double tol = 1e-8;
  int max_iters = 10000;
};

// Seed coordinates from the two smallest nontrivial eigenvectors of the
// area-weighted normalized Laplacian, rescaled so the center bounding box
// fills 80% of the board. Fewer than 3 components fall back to a centered
// layout. Fixed components are snapped afterwards.
Placement spectral_coordinates(const Design& d, const SpectralConfig& cfg = {});

// Raw area-orthogonal eigen coordinates before rescaling (test hook).
struct SpectralRaw {
  std::vector<double> x, y;
  bool fallback = false;
};
SpectralRaw spectral_raw_coordinates(const Design& d, const SpectralConfig& cfg);

// Tries the 4 global flips of the seed, then one greedy per-component
// orientation sweep per variant against the composite objective; returns the
// cheapest. Never returns something worse than the seed.
Placement orientation_search(const Design& d, const Placement& seed,
                             const ObjectiveConfig& cfg, const PairSet& pairs,
                             const DensityGrid& grid, int threads = 1);

}  // namespace nsplace
