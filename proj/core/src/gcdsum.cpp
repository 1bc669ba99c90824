#include "mppc/gcdsum.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <random>
#include <stdexcept>

#include "mppc/parallel.hpp"
#include "mppc/seeding.hpp"

namespace mppc {

namespace {

void check_alpha_gcd(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must lie in (0, 1]");
}

void check_alpha_model(double alpha) {
  if (!(alpha > 0.5) || !std::isfinite(alpha))
    throw std::invalid_argument("alpha must exceed 1/2 for the random zeta model");
}

// Uniform on [0,1) with 53 random bits; independent of the standard
// library's distribution implementation.
double unit_uniform(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

// Precomputed n^-beta for 1 <= n <= M (index 0 unused).
std::vector<double> inverse_powers(std::uint64_t M, double beta) {
  std::vector<double> out(M + 1, 0.0);
  for (std::uint64_t n = 1; n <= M; ++n) out[n] = std::pow(static_cast<double>(n), -beta);
  return out;
}

}  // namespace

WeightedSupport::WeightedSupport(std::size_t dim, std::vector<std::uint64_t> coords,
                                 std::vector<Complex> weights)
    : dim_(dim) {
  if (dim == 0) throw std::invalid_argument("support dimension must be >= 1");
  if (coords.size() != dim * weights.size())
    throw std::invalid_argument("support coordinates do not match weights");
  if (weights.empty()) throw std::invalid_argument("empty support");
  for (auto c : coords)
    if (c == 0) throw std::invalid_argument("support points must have components >= 1");

  std::map<std::vector<std::uint64_t>, Complex> merged;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    std::vector<std::uint64_t> key(coords.begin() + static_cast<long>(i * dim),
                                   coords.begin() + static_cast<long>((i + 1) * dim));
    merged[std::move(key)] += weights[i];
  }
  for (const auto& [key, w] : merged) {
    coords_.insert(coords_.end(), key.begin(), key.end());
    weights_.push_back(w);
    norm1_ += std::abs(w);
    norm2_sq_ += std::norm(w);
  }
}

WeightedSupport WeightedSupport::indicator(std::size_t dim, std::vector<std::uint64_t> coords) {
  const std::size_t K = dim == 0 ? 0 : coords.size() / dim;
  return WeightedSupport(dim, std::move(coords), std::vector<Complex>(K, Complex(1.0, 0.0)));
}

std::uint64_t WeightedSupport::max_coordinate() const noexcept {
  return coords_.empty() ? 0 : *std::max_element(coords_.begin(), coords_.end());
}

bool WeightedSupport::norms_consistent() const {
  double n1 = 0.0;
  double n2 = 0.0;
  for (auto w : weights_) {
    n1 += std::abs(w);
    n2 += std::norm(w);
  }
  const auto close = [](double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b)); };
  return close(n1, norm1_) && close(n2, norm2_sq_);
}

double gcd_kernel(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b,
                  double alpha) {
  double ratio = 1.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto g = static_cast<double>(std::gcd(a[i], b[i]));
    ratio *= (g / static_cast<double>(a[i])) * (g / static_cast<double>(b[i]));
  }
  return std::pow(ratio, alpha);
}

double gcd_sum(const WeightedSupport& f, double alpha) {
  check_alpha_gcd(alpha);
  // Hermitian form: diagonal plus twice the real part of the upper triangle.
  long double diagonal = 0.0L;
  long double off = 0.0L;
  for (std::size_t i = 0; i < f.size(); ++i) {
    diagonal += std::norm(f.weight(i));
    for (std::size_t j = i + 1; j < f.size(); ++j) {
      const double k = gcd_kernel(f.point(i), f.point(j), alpha);
      off += k * (f.weight(i) * std::conj(f.weight(j))).real();
    }
  }
  return static_cast<double>(diagonal + 2.0L * off);
}

WeightedSupport fold_representations(const RepresentationTable& table) {
  std::vector<std::uint64_t> coords;
  std::vector<Complex> weights;
  for (std::size_t i = 0; i < table.size(); ++i) {
    const auto v = table.key(i);
    if (std::any_of(v.begin(), v.end(), [](std::int64_t c) { return c == 0; })) continue;
    for (auto c : v) coords.push_back(static_cast<std::uint64_t>(c < 0 ? -c : c));
    weights.emplace_back(static_cast<double>(table.count(i)), 0.0);
  }
  if (weights.empty())
    throw std::invalid_argument(
        "representation table has no difference vector with all components nonzero");
  return WeightedSupport(table.dim(), std::move(coords), std::move(weights));
}

double gcd_sum_from_representations(const RepresentationTable& table, double alpha) {
  return gcd_sum(fold_representations(table), alpha);
}

RepresentationTable marginal(const RepresentationTable& table,
                             std::span<const std::size_t> components) {
  if (components.empty()) throw std::invalid_argument("marginal needs at least one component");
  for (auto c : components)
    if (c >= table.dim()) throw std::invalid_argument("marginal component out of range");
  RepresentationTable out(components.size(), table.N());
  std::vector<std::int64_t> u(components.size());
  for (std::size_t i = 0; i < table.size(); ++i) {
    const auto v = table.key(i);
    for (std::size_t j = 0; j < components.size(); ++j) u[j] = v[components[j]];
    out.append(u, table.count(i));
  }
  out.finalize();
  return out;
}

RandomMultiplicativeSample::RandomMultiplicativeSample(std::uint64_t seed, std::uint64_t cutoff)
    : cutoff_(cutoff) {
  if (cutoff == 0) throw std::invalid_argument("random multiplicative cutoff must be >= 1");
  std::vector<std::uint64_t> smallest_factor(cutoff + 1, 0);
  for (std::uint64_t p = 2; p <= cutoff; ++p) {
    if (smallest_factor[p] != 0) continue;
    for (std::uint64_t k = p; k <= cutoff; k += p)
      if (smallest_factor[k] == 0) smallest_factor[k] = p;
  }
  std::mt19937_64 gen(splitmix64(seed));
  values_.assign(cutoff + 1, Complex(0.0, 0.0));
  values_[1] = Complex(1.0, 0.0);
  for (std::uint64_t n = 2; n <= cutoff; ++n) {
    const std::uint64_t p = smallest_factor[n];
    if (p == n) {
      const double theta = 2.0 * std::numbers::pi * unit_uniform(gen);
      values_[n] = std::polar(1.0, theta);
      primes_.emplace_back(p, values_[n]);
    } else {
      values_[n] = values_[p] * values_[n / p];
    }
  }
}

Complex RandomMultiplicativeSample::operator()(std::uint64_t n) const {
  if (n == 0 || n > cutoff_) throw std::out_of_range("X(n) requested beyond the sample cutoff");
  return values_[n];
}

RandomMultiplicativeSample sample_random_multiplicative(std::uint64_t seed,
                                                        std::uint64_t cutoff) {
  return RandomMultiplicativeSample(seed, cutoff);
}

Complex zeta_trunc(const RandomMultiplicativeSample& sample, double alpha, std::uint64_t M) {
  if (M > sample.cutoff()) throw std::invalid_argument("zeta_trunc: M exceeds sample cutoff");
  Complex sum(0.0, 0.0);
  for (std::uint64_t n = 1; n <= M; ++n)
    sum += sample(n) * std::pow(static_cast<double>(n), -alpha);
  return sum;
}

double riemann_zeta(double s) {
  if (!(s > 1.0)) throw std::invalid_argument("riemann_zeta requires s > 1");
  constexpr int kTerms = 64;
  // B_{2k} / (2k)! for k = 1..7.
  constexpr double kBernoulliOverFactorial[] = {
      1.0 / 12.0,
      -1.0 / 720.0,
      1.0 / 30240.0,
      -1.0 / 1209600.0,
      1.0 / 47900160.0,
      -691.0 / 1307674368000.0,
      1.0 / 74724249600.0,
  };
  long double sum = 0.0L;
  for (int n = 1; n < kTerms; ++n) sum += std::pow(static_cast<long double>(n), -s);
  const long double N = kTerms;
  sum += std::pow(N, 1.0L - s) / (s - 1.0L) + 0.5L * std::pow(N, -s);
  long double rising = s;  // s (s+1) ... (s + 2k - 2)
  long double power = std::pow(N, -s - 1.0L);
  for (int k = 0; k < 7; ++k) {
    sum += kBernoulliOverFactorial[k] * rising * power;
    rising *= (s + 2.0L * k + 1.0L) * (s + 2.0L * k + 2.0L);
    power /= N * N;
  }
  return static_cast<double>(sum);
}

MonteCarloEstimate summarize(std::span<const double> values) {
  MonteCarloEstimate out;
  if (values.empty()) return out;
  long double sum = 0.0L;
  for (double v : values) sum += v;
  const long double mean = sum / static_cast<long double>(values.size());
  long double ss = 0.0L;
  for (double v : values) ss += (v - mean) * (v - mean);
  out.mean = static_cast<double>(mean);
  if (values.size() > 1) {
    const long double var = ss / static_cast<long double>(values.size() - 1);
    out.std_error = static_cast<double>(std::sqrt(var / static_cast<long double>(values.size())));
  }
  return out;
}

double eq0_truncated_rhs(const WeightedSupport& f, double alpha, std::uint64_t M) {
  if (f.dim() != 2) throw std::invalid_argument("the random-model identity needs d = 2");
  check_alpha_model(alpha);
  // prefix[k] = sum_{h <= k} h^(-2 alpha)
  std::vector<long double> prefix(M + 1, 0.0L);
  for (std::uint64_t h = 1; h <= M; ++h)
    prefix[h] = prefix[h - 1] + std::pow(static_cast<long double>(h), -2.0L * alpha);

  // n1 a = n2 c forces n1 = h c/g, n2 = h a/g; truncation n1, n2 <= M caps h.
  const auto factor = [&](std::uint64_t a, std::uint64_t c) -> long double {
    const std::uint64_t g = std::gcd(a, c);
    const std::uint64_t h_max = M / (std::max(a, c) / g);
    const long double kernel =
        std::pow(static_cast<long double>(g) * g / (static_cast<long double>(a) * c), alpha);
    return kernel * prefix[h_max];
  };

  long double total = 0.0L;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const auto ab = f.point(i);
    for (std::size_t j = 0; j < f.size(); ++j) {
      const auto cd = f.point(j);
      const Complex w = f.weight(i) * std::conj(f.weight(j));
      total += static_cast<long double>(w.real()) * factor(ab[0], cd[0]) * factor(ab[1], cd[1]);
    }
  }
  return static_cast<double>(total);
}

Eq0Report verify_eq0(const WeightedSupport& f, double alpha, std::uint64_t M,
                     std::size_t samples, std::uint64_t seed, std::size_t workers) {
  if (f.dim() != 2) throw std::invalid_argument("the random-model identity needs d = 2");
  check_alpha_model(alpha);
  if (samples < 100) throw std::invalid_argument("verify_eq0 needs at least 100 samples");
  if (M == 0 || 2 * f.max_coordinate() > M)
    throw std::invalid_argument("support components must not exceed M/2");

  const auto weights = inverse_powers(M, alpha);
  std::vector<double> product(samples);
  std::vector<double> dirichlet(samples);
  parallel_for(samples, workers, [&](std::size_t i) {
    const RandomMultiplicativeSample X(derive_seed(seed, {i, 0}), M);
    const RandomMultiplicativeSample Y(derive_seed(seed, {i, 1}), M);
    Complex zx(0.0, 0.0);
    Complex zy(0.0, 0.0);
    for (std::uint64_t n = 1; n <= M; ++n) {
      zx += X(n) * weights[n];
      zy += Y(n) * weights[n];
    }
    Complex D(0.0, 0.0);
    for (std::size_t k = 0; k < f.size(); ++k) {
      const auto ab = f.point(k);
      D += f.weight(k) * X(ab[0]) * Y(ab[1]);
    }
    product[i] = std::norm(zx * zy * D);
    dirichlet[i] = std::norm(D);
  });

  Eq0Report report;
  report.zeta_product = summarize(product);
  report.dirichlet_moment = summarize(dirichlet);
  report.exact_truncated_rhs = eq0_truncated_rhs(f, alpha, M);
  const double z = riemann_zeta(2.0 * alpha);
  report.untruncated_rhs = z * z * gcd_sum(f, alpha);
  report.f_norm2_squared = f.norm2_squared();
  report.samples = samples;
  report.M = M;
  report.alpha = alpha;
  report.seed = seed;
  return report;
}

std::vector<MomentRow> moment_growth_probe(double alpha, std::span<const double> l_values,
                                           std::size_t samples, std::uint64_t M,
                                           std::uint64_t seed, std::size_t workers) {
  check_alpha_model(alpha);
  if (samples < 2) throw std::invalid_argument("moment probe needs at least 2 samples");
  if (M == 0) throw std::invalid_argument("moment probe needs M >= 1");
  const auto weights = inverse_powers(M, alpha);
  std::vector<double> modulus_sq(samples);
  parallel_for(samples, workers, [&](std::size_t i) {
    const RandomMultiplicativeSample X(derive_seed(seed, {i, 0}), M);
    Complex z(0.0, 0.0);
    for (std::uint64_t n = 1; n <= M; ++n) z += X(n) * weights[n];
    modulus_sq[i] = std::norm(z);
  });
  std::vector<MomentRow> rows;
  std::vector<double> powered(samples);
  for (double l : l_values) {
    for (std::size_t i = 0; i < samples; ++i) powered[i] = std::pow(modulus_sq[i], l);
    rows.push_back({l, summarize(powered)});
  }
  return rows;
}

}  // namespace mppc
