// Exact fixed-point arithmetic on the unit torus.
//
// A Frac64 stores a point of [0,1) as numerator/2^64. Addition, subtraction
// and multiplication by an integer all wrap mod 1 exactly, so orbits {a_n alpha}
// carry no floating-point drift even when a_n is of order 10^12 or larger.
// Distances are converted to binary64 only when they are compared against a
// threshold.

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>

namespace mppc {

struct Frac64 {
  std::uint64_t numerator = 0;

  constexpr Frac64() = default;
  constexpr explicit Frac64(std::uint64_t num) : numerator(num) {}

  /// Value as a real in [0,1); rounds to nearest binary64.
  [[nodiscard]] double value() const noexcept;

  friend constexpr Frac64 operator+(Frac64 a, Frac64 b) noexcept {
    return Frac64{a.numerator + b.numerator};
  }
  friend constexpr Frac64 operator-(Frac64 a, Frac64 b) noexcept {
    return Frac64{a.numerator - b.numerator};
  }
  friend constexpr bool operator==(Frac64, Frac64) = default;
  friend constexpr auto operator<=>(Frac64, Frac64) = default;
};

/// Nearest-integer distance ||x|| of a torus coordinate, kept on the grid.
/// The result numerator is at most 2^63.
[[nodiscard]] constexpr std::uint64_t nearest_int_numerator(Frac64 x) noexcept {
  const std::uint64_t n = x.numerator;
  return n <= (std::uint64_t{1} << 63) ? n : std::uint64_t{0} - n;
}

/// Converts a grid numerator to binary64.
[[nodiscard]] double grid_to_double(std::uint64_t numerator) noexcept;

/// Fractional part of a finite real, rounded down to the 2^-64 grid.
/// Throws std::invalid_argument on NaN or infinity.
[[nodiscard]] Frac64 frac_of_real(double x);

/// Exact {a x} on the grid: (a * numerator) mod 2^64.
[[nodiscard]] constexpr Frac64 frac_mul(std::uint64_t a, Frac64 x) noexcept {
  return Frac64{a * x.numerator};
}

inline constexpr std::size_t kMaxTorusDim = 8;

/// A point of the d-torus [0,1)^d, 1 <= d <= kMaxTorusDim, stored inline.
class TorusPoint {
 public:
  TorusPoint() = default;
  explicit TorusPoint(std::size_t dim);
  TorusPoint(std::initializer_list<Frac64> coords);
  explicit TorusPoint(std::span<const Frac64> coords);

  /// Convenience for tests and the CLI: reduces each real mod 1.
  static TorusPoint from_reals(std::span<const double> coords);
  static TorusPoint from_reals(std::initializer_list<double> coords);

  [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
  [[nodiscard]] std::span<const Frac64> coords() const noexcept {
    return {coords_.data(), dim_};
  }
  [[nodiscard]] Frac64 operator[](std::size_t i) const noexcept { return coords_[i]; }
  Frac64& operator[](std::size_t i) noexcept { return coords_[i]; }

  friend bool operator==(const TorusPoint& a, const TorusPoint& b) noexcept;

 private:
  std::array<Frac64, kMaxTorusDim> coords_{};
  std::size_t dim_ = 0;
};

/// Coordinatewise translation mod 1.
[[nodiscard]] TorusPoint translate(const TorusPoint& p, const TorusPoint& offset);

/// max_i ||p_i - q_i||. Throws std::invalid_argument on dimension mismatch.
[[nodiscard]] double dist_sup(const TorusPoint& p, const TorusPoint& q);

/// (sum_i ||p_i - q_i||^2)^(1/2). Throws std::invalid_argument on dimension mismatch.
[[nodiscard]] double dist_2(const TorusPoint& p, const TorusPoint& q);

/// Deterministic uniform point on the 2^-64 grid of [0,1)^d.
[[nodiscard]] TorusPoint sample_alpha(std::uint64_t seed, std::size_t dim);

}  // namespace mppc
