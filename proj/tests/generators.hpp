// Small seeded generators for property tests.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <set>
#include <vector>

#include "mppc/fixedpoint.hpp"

namespace mppc::testing {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  std::uint64_t u64() { return rng_(); }

  std::uint64_t uniform(std::uint64_t lo, std::uint64_t hi) {
    return std::uniform_int_distribution<std::uint64_t>(lo, hi)(rng_);
  }

  std::int64_t signed_uniform(std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng_);
  }

  double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

  /// Log-uniform in [lo, hi].
  double log_real(double lo, double hi) { return std::exp(real(std::log(lo), std::log(hi))); }

  bool coin(double p = 0.5) { return real(0.0, 1.0) < p; }

  Frac64 frac() { return Frac64{rng_()}; }

  TorusPoint point(std::size_t dim) {
    TorusPoint p(dim);
    for (std::size_t i = 0; i < dim; ++i) p[i] = frac();
    return p;
  }

  /// Points that stress the counters: uniform, clustered, on a coarse
  /// dyadic lattice (exact ties), or hugging the wrap boundary.
  std::vector<TorusPoint> adversarial_points(std::size_t n, std::size_t dim) {
    std::vector<TorusPoint> out;
    const auto mode = uniform(0, 3);
    const TorusPoint centre = point(dim);
    for (std::size_t k = 0; k < n; ++k) {
      TorusPoint p(dim);
      for (std::size_t i = 0; i < dim; ++i) {
        switch (mode) {
          case 0: p[i] = frac(); break;
          case 1: p[i] = centre[i] + Frac64{u64() >> uniform(6, 20)}; break;
          case 2: p[i] = Frac64{uniform(0, 63) << 58}; break;
          default: p[i] = Frac64{coin() ? u64() >> 12 : ~(u64() >> 12)}; break;
        }
      }
      out.push_back(p);
    }
    return out;
  }

  /// Strictly increasing positive integers, n of them, below `bound`.
  std::vector<std::uint64_t> increasing(std::size_t n, std::uint64_t bound) {
    std::set<std::uint64_t> s;
    while (s.size() < n) s.insert(uniform(1, bound));
    return {s.begin(), s.end()};
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace mppc::testing
