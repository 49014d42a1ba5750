#pragma once

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace nsplace {

// Shortest decimal string that parses back to exactly the same double.
inline std::string fmt_double(double v) {
  char buf[64];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

// Deterministic RNG with explicit derivations so generated files are
// byte-identical across platforms (std distributions are not portable).
class Rng {
 public:
  explicit Rng(uint64_t seed) : s_(seed ? seed : 0x9e3779b97f4a7c15ull) {
    for (int i = 0; i < 8; ++i) next_u64();
  }
  uint64_t next_u64() {
    // splitmix64
    uint64_t z = (s_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double log_uniform(double lo, double hi) {
    return lo * std::pow(hi / lo, uniform());
  }
  // integer in [0, n)
  uint64_t below(uint64_t n) { return n ? next_u64() % n : 0; }
  int range(int lo, int hi) { return lo + int(below(uint64_t(hi - lo + 1))); }

 private:
  uint64_t s_;
};

class Timer {
 public:
  Timer() : t0_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point t0_;
};

// Runs fn(i) for i in [0, n). Items must be independent; results are expected
// to land in per-item slots so the outcome does not depend on scheduling.
inline void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
  if (threads <= 1 || n < 2 * threads) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  int nt = std::min(threads, n);
  std::vector<std::thread> pool;
  pool.reserve(nt);
  for (int t = 0; t < nt; ++t) {
    pool.emplace_back([&, t]() {
      for (int i = t; i < n; i += nt) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace nsplace
