// Bessel functions of real order and the Fourier coefficients of box and
// ball indicators on the torus.
//
// J_nu(t) for 0 <= nu <= 5, 0 <= t <= 1e4:
//   t <= 12  power series in long double with an alternating-tail bound
//   t >  12  Schlafli's integral
//            (1/pi) int_0^pi cos(nu th - t sin th) dth
//              - (sin(nu pi)/pi) int_0^inf exp(-t sinh u - nu u) du
//            by composite Gauss-Legendre, refined until two levels agree.
// For integer nu the second integral vanishes and the first is the classical
// integral representation.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace mppc {

enum class BesselMethod { Series, Quadrature, Asymptotic };

[[nodiscard]] std::string_view to_string(BesselMethod method) noexcept;

struct BesselEval {
  double nu = 0.0;
  double t = 0.0;
  double value = 0.0;
  BesselMethod method = BesselMethod::Series;
  double abs_error_bound = 0.0;
};

inline constexpr double kMaxBesselOrder = 5.0;
inline constexpr double kMaxBesselArgument = 1e4;
inline constexpr double kSeriesCutoff = 12.0;

/// Throws std::domain_error outside nu in [0, 5], t in [0, 1e4].
[[nodiscard]] BesselEval bessel_j(double nu, double t);

/// sqrt(2 / (pi t)) cos(t - pi nu / 2 - pi / 4); requires t >= 1.
[[nodiscard]] double bessel_asymptotic(double nu, double t);

/// Fourier coefficient of the indicator of the Euclidean ball of radius
/// s / N^(1/d) at frequency r (d = r.size()).
[[nodiscard]] double fourier_coeff_ball(std::span<const std::int64_t> r, double s, std::size_t N);

/// One-dimensional factor of the box coefficient: integral of e(-r x) over
/// |x| <= s N^(-1/d).
[[nodiscard]] double fourier_coeff_box(std::int64_t r, double s, std::size_t N, std::size_t dim);

/// Full box coefficient, the product of the per-coordinate factors.
[[nodiscard]] double fourier_coeff_box(std::span<const std::int64_t> r, double s, std::size_t N);

struct BesselBoundRow {
  double nu = 0.0;
  double max_abs_small_t = 0.0;    // max |J| over t <= 1
  double max_sqrt_t_abs = 0.0;     // max sqrt(t) |J| over t > 1
  double max_abs = 0.0;            // max |J| over the whole grid
  bool integer_order = false;
  bool unit_bound_holds = true;    // |J| <= 1 (asserted for integer order)
};

struct BesselBoundsReport {
  std::vector<BesselBoundRow> rows;
  [[nodiscard]] bool ok() const noexcept;
};

/// Scans the grid nus x ts and reports the magnitudes that bound J.
[[nodiscard]] BesselBoundsReport check_bessel_bounds(std::span<const double> nus,
                                                     std::span<const double> ts);

}  // namespace mppc
