#include "mppc/fixedpoint.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "mppc/seeding.hpp"

namespace mppc {

namespace {

constexpr long double kTwo64 = 18446744073709551616.0L;

void check_same_dim(const TorusPoint& p, const TorusPoint& q) {
  if (p.dim() != q.dim()) throw std::invalid_argument("torus points differ in dimension");
}

}  // namespace

double Frac64::value() const noexcept { return grid_to_double(numerator); }

double grid_to_double(std::uint64_t numerator) noexcept {
  return std::ldexp(static_cast<double>(numerator), -64);
}

Frac64 frac_of_real(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("frac_of_real: non-finite input");
  // x - floor(x) is exact for binary64 inputs; scaling by 2^64 is exact in
  // long double, so the floor below is the exact grid truncation.
  const long double f = static_cast<long double>(x) - std::floor(static_cast<long double>(x));
  const long double scaled = std::floor(f * kTwo64);
  if (scaled >= kTwo64) return Frac64{std::numeric_limits<std::uint64_t>::max()};
  if (scaled <= 0.0L) return Frac64{0};
  return Frac64{static_cast<std::uint64_t>(scaled)};
}

TorusPoint::TorusPoint(std::size_t dim) : dim_(dim) {
  if (dim == 0 || dim > kMaxTorusDim) throw std::invalid_argument("torus dimension out of range");
}

TorusPoint::TorusPoint(std::initializer_list<Frac64> coords)
    : TorusPoint(std::span<const Frac64>(coords.begin(), coords.size())) {}

TorusPoint::TorusPoint(std::span<const Frac64> coords) : TorusPoint(coords.size()) {
  std::copy(coords.begin(), coords.end(), coords_.begin());
}

TorusPoint TorusPoint::from_reals(std::span<const double> coords) {
  TorusPoint p(coords.size());
  for (std::size_t i = 0; i < coords.size(); ++i) p.coords_[i] = frac_of_real(coords[i]);
  return p;
}

TorusPoint TorusPoint::from_reals(std::initializer_list<double> coords) {
  return from_reals(std::span<const double>(coords.begin(), coords.size()));
}

bool operator==(const TorusPoint& a, const TorusPoint& b) noexcept {
  return a.dim_ == b.dim_ && std::equal(a.coords_.begin(), a.coords_.begin() + a.dim_,
                                        b.coords_.begin());
}

TorusPoint translate(const TorusPoint& p, const TorusPoint& offset) {
  check_same_dim(p, offset);
  TorusPoint out(p.dim());
  for (std::size_t i = 0; i < p.dim(); ++i) out[i] = p[i] + offset[i];
  return out;
}

double dist_sup(const TorusPoint& p, const TorusPoint& q) {
  check_same_dim(p, q);
  std::uint64_t worst = 0;
  for (std::size_t i = 0; i < p.dim(); ++i)
    worst = std::max(worst, nearest_int_numerator(p[i] - q[i]));
  return grid_to_double(worst);
}

double dist_2(const TorusPoint& p, const TorusPoint& q) {
  check_same_dim(p, q);
  double sum = 0.0;
  for (std::size_t i = 0; i < p.dim(); ++i) {
    const double c = grid_to_double(nearest_int_numerator(p[i] - q[i]));
    sum += c * c;
  }
  return std::sqrt(sum);
}

TorusPoint sample_alpha(std::uint64_t seed, std::size_t dim) {
  TorusPoint p(dim);
  std::mt19937_64 gen(splitmix64(seed));
  for (std::size_t i = 0; i < dim; ++i) p[i] = Frac64{gen()};
  return p;
}

}  // namespace mppc
