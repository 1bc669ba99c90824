// Pair correlation statistics on the d-torus.
//
// R(s, N) = #{ordered (m, n), m != n : dist(x_m, x_n) <= s / N^(1/d)} / N
//
// Two counters compute the same number: ppc_naive scans all pairs, ppc_grid
// bins points into congruent cells of side >= threshold and only compares
// same-or-adjacent cells. Both go through NearPredicate, so their counts are
// identical bit for bit.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "mppc/fixedpoint.hpp"

namespace mppc {

enum class NormKind { Sup, Two };

[[nodiscard]] std::string_view to_string(NormKind norm) noexcept;
/// Accepts "sup", "inf", "infinity", "two", "2", "euclid".
[[nodiscard]] NormKind parse_norm(std::string_view text);

struct PairCountResult {
  std::uint64_t near_pairs = 0;
  std::size_t N = 0;
  double s = 0.0;
  double statistic = 0.0;
  double limit = 0.0;
  /// limit * (N - 1) / N, the exact mean over alpha.
  double expectation = 0.0;
  NormKind norm = NormKind::Sup;
};

/// Threshold s / N^(1/d) used by both counters.
[[nodiscard]] double pair_threshold(double s, std::size_t N, std::size_t dim);

/// Inclusive distance test shared by every counter.
class NearPredicate {
 public:
  NearPredicate(double threshold, std::size_t dim, NormKind norm);

  [[nodiscard]] bool operator()(const TorusPoint& p, const TorusPoint& q) const noexcept {
    if (norm_ == NormKind::Sup) {
      for (std::size_t i = 0; i < dim_; ++i)
        if (grid_to_double(nearest_int_numerator(p[i] - q[i])) > threshold_) return false;
      return true;
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) {
      const double c = grid_to_double(nearest_int_numerator(p[i] - q[i]));
      sum += c * c;
    }
    return sum <= threshold_sq_;
  }

  [[nodiscard]] double threshold() const noexcept { return threshold_; }

 private:
  double threshold_;
  double threshold_sq_;
  std::size_t dim_;
  NormKind norm_;
};

/// O(N^2) reference counter.
[[nodiscard]] PairCountResult ppc_naive(std::span<const TorusPoint> points, double s,
                                        NormKind norm);

/// Cell-grid counter; same count as ppc_naive for every input.
[[nodiscard]] PairCountResult ppc_grid(std::span<const TorusPoint> points, double s,
                                       NormKind norm);

/// (2s)^d for the sup norm, omega_d s^d for the Euclidean norm.
[[nodiscard]] double ppc_limit(double s, std::size_t dim, NormKind norm);

/// Volume of the Euclidean unit ball in R^d.
[[nodiscard]] double unit_ball_volume(std::size_t dim);

}  // namespace mppc
