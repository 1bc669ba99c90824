#include "mppc/bessel.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "mppc/paircorr.hpp"

namespace mppc {

namespace {

constexpr std::size_t kGaussPoints = 16;
constexpr double kQuadratureTolerance = 1e-13;

struct GaussLegendre {
  std::array<double, kGaussPoints> nodes{};
  std::array<double, kGaussPoints> weights{};
};

// Newton iteration on P_n from Chebyshev initial guesses.
GaussLegendre make_gauss_legendre() {
  GaussLegendre rule;
  constexpr int n = static_cast<int>(kGaussPoints);
  for (int i = 0; i < n; ++i) {
    long double x = std::cos(std::numbers::pi_v<long double> * (i + 0.75L) / (n + 0.5L));
    long double dp = 0.0L;
    for (int iter = 0; iter < 100; ++iter) {
      long double p0 = 1.0L;
      long double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const long double p2 = ((2.0L * k - 1.0L) * x * p1 - (k - 1.0L) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0L);
      const long double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-19L) break;
    }
    rule.nodes[static_cast<std::size_t>(i)] = static_cast<double>(x);
    rule.weights[static_cast<std::size_t>(i)] = static_cast<double>(2.0L / ((1.0L - x * x) * dp * dp));
  }
  return rule;
}

const GaussLegendre& gauss_legendre() {
  static const GaussLegendre rule = make_gauss_legendre();
  return rule;
}

template <class F>
double composite_gauss(F&& f, double a, double b, std::size_t panels) {
  const auto& rule = gauss_legendre();
  const double width = (b - a) / static_cast<double>(panels);
  long double total = 0.0L;
  for (std::size_t p = 0; p < panels; ++p) {
    const double lo = a + width * static_cast<double>(p);
    const double mid = lo + 0.5 * width;
    long double panel = 0.0L;
    for (std::size_t k = 0; k < kGaussPoints; ++k)
      panel += rule.weights[k] * f(mid + 0.5 * width * rule.nodes[k]);
    total += panel * 0.5L * width;
  }
  return static_cast<double>(total);
}

struct QuadratureResult {
  double value;
  double error;
};

// Doubles the panel count until consecutive levels agree.
template <class F>
QuadratureResult refine(F&& f, double a, double b, std::size_t panels) {
  double coarse = composite_gauss(f, a, b, panels);
  for (int level = 0; level < 8; ++level) {
    panels *= 2;
    const double fine = composite_gauss(f, a, b, panels);
    const double diff = std::fabs(fine - coarse);
    if (diff < kQuadratureTolerance) return {fine, diff};
    coarse = fine;
  }
  throw std::runtime_error("Bessel quadrature did not converge");
}

BesselEval series(double nu, double t) {
  BesselEval out{nu, t, 0.0, BesselMethod::Series, 0.0};
  if (t == 0.0) {
    out.value = nu == 0.0 ? 1.0 : 0.0;
    return out;
  }
  const long double half = 0.5L * t;
  const long double q = -half * half;
  long double term = std::pow(half, static_cast<long double>(nu)) /
                     std::tgamma(static_cast<long double>(nu) + 1.0L);
  long double sum = 0.0L;
  long double magnitude = 0.0L;
  long double omitted = 0.0L;
  int steps = 0;
  for (int k = 0; k < 200; ++k) {
    steps = k + 1;
    const long double ratio = std::fabs(q) / ((k + 1.0L) * (nu + k + 1.0L));
    sum += term;
    magnitude += std::fabs(term);
    const long double next = term * q / ((k + 1.0L) * (nu + k + 1.0L));
    // Past the peak the series alternates with decreasing terms, so the
    // truncation error is at most the first omitted term.
    if (ratio < 1.0L && std::fabs(next) < 1e-21L * std::max(1.0L, magnitude)) {
      omitted = std::fabs(next);
      break;
    }
    term = next;
  }
  out.value = static_cast<double>(sum);
  // Term k carries about 2k roundings from the recurrence.
  const long double rounding =
      magnitude * (4.0L * steps + 8.0L) * std::numeric_limits<long double>::epsilon();
  out.abs_error_bound = static_cast<double>(omitted + rounding) +
                        std::fabs(out.value) * 2.0 * std::numeric_limits<double>::epsilon();
  return out;
}

BesselEval quadrature(double nu, double t) {
  BesselEval out{nu, t, 0.0, BesselMethod::Quadrature, 0.0};
  const double pi = std::numbers::pi;
  // About one oscillation of cos(nu th - t sin th) per panel.
  const auto panels = static_cast<std::size_t>(std::ceil((t + nu) / 2.0)) + 4;
  const auto first = refine([&](double th) { return std::cos(nu * th - t * std::sin(th)); }, 0.0,
                            pi, panels);
  double value = first.value / pi;
  double error = first.error / pi;
  if (nu != std::floor(nu)) {
    // Integrand below exp(-50) beyond t sinh u = 50.
    const double upper = std::asinh(50.0 / t);
    const auto second = refine([&](double u) { return std::exp(-t * std::sinh(u) - nu * u); },
                               0.0, upper, 8);
    const double weight = std::sin(nu * pi) / pi;
    value -= weight * second.value;
    error += std::fabs(weight) * (second.error + 2e-22);
  }
  out.value = value;
  out.abs_error_bound = error + static_cast<double>(panels) * 1e-17;
  return out;
}

}  // namespace

std::string_view to_string(BesselMethod method) noexcept {
  switch (method) {
    case BesselMethod::Series: return "series";
    case BesselMethod::Quadrature: return "quadrature";
    case BesselMethod::Asymptotic: return "asymptotic";
  }
  return "unknown";
}

BesselEval bessel_j(double nu, double t) {
  if (!(nu >= 0.0 && nu <= kMaxBesselOrder))
    throw std::domain_error("Bessel order " + std::to_string(nu) + " outside [0, 5]");
  if (!(t >= 0.0 && t <= kMaxBesselArgument))
    throw std::domain_error("Bessel argument " + std::to_string(t) + " outside [0, 1e4]");
  return t <= kSeriesCutoff ? series(nu, t) : quadrature(nu, t);
}

double bessel_asymptotic(double nu, double t) {
  if (!(t >= 1.0)) throw std::domain_error("asymptotic form requires t >= 1");
  const double pi = std::numbers::pi;
  return std::sqrt(2.0 / (pi * t)) * std::cos(t - pi * nu / 2.0 - pi / 4.0);
}

double fourier_coeff_ball(std::span<const std::int64_t> r, double s, std::size_t N) {
  const std::size_t d = r.size();
  if (d == 0) throw std::invalid_argument("frequency vector must be nonempty");
  if (N == 0 || !(s > 0.0)) throw std::invalid_argument("need s > 0 and N >= 1");
  const double radius = pair_threshold(s, N, d);
  if (!(radius < 0.5)) throw std::invalid_argument("threshold s/N^(1/d) must be < 1/2");
  double norm_sq = 0.0;
  for (auto c : r) norm_sq += static_cast<double>(c) * static_cast<double>(c);
  const double half_d = static_cast<double>(d) / 2.0;
  const double sd = std::pow(s, static_cast<double>(d));
  if (norm_sq == 0.0) return unit_ball_volume(d) * sd / static_cast<double>(N);
  const double norm = std::sqrt(norm_sq);
  const double arg = 2.0 * std::numbers::pi * radius * norm;
  return std::pow(s, half_d) / (std::sqrt(static_cast<double>(N)) * std::pow(norm, half_d)) *
         bessel_j(half_d, arg).value;
}

double fourier_coeff_box(std::int64_t r, double s, std::size_t N, std::size_t dim) {
  if (N == 0 || dim == 0 || !(s > 0.0)) throw std::invalid_argument("need s > 0, N, d >= 1");
  const double half_width = pair_threshold(s, N, dim);
  if (!(half_width < 0.5)) throw std::invalid_argument("threshold s/N^(1/d) must be < 1/2");
  if (r == 0) return 2.0 * half_width;
  const auto rr = static_cast<double>(r);
  return std::sin(2.0 * std::numbers::pi * rr * half_width) / (std::numbers::pi * rr);
}

double fourier_coeff_box(std::span<const std::int64_t> r, double s, std::size_t N) {
  double c = 1.0;
  for (auto ri : r) c *= fourier_coeff_box(ri, s, N, r.size());
  return c;
}

bool BesselBoundsReport::ok() const noexcept {
  for (const auto& row : rows)
    if (!row.unit_bound_holds) return false;
  return true;
}

BesselBoundsReport check_bessel_bounds(std::span<const double> nus, std::span<const double> ts) {
  BesselBoundsReport report;
  for (double nu : nus) {
    BesselBoundRow row;
    row.nu = nu;
    row.integer_order = nu == std::floor(nu);
    for (double t : ts) {
      if (!(t > 0.0)) continue;
      const double a = std::fabs(bessel_j(nu, t).value);
      row.max_abs = std::max(row.max_abs, a);
      if (t <= 1.0)
        row.max_abs_small_t = std::max(row.max_abs_small_t, a);
      else
        row.max_sqrt_t_abs = std::max(row.max_sqrt_t_abs, std::sqrt(t) * a);
    }
    row.unit_bound_holds = !row.integer_order || row.max_abs <= 1.0;
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace mppc
