// GCD sums and the random multiplicative model behind their bounds.
//
//   S_f(d; alpha) = sum_{a, b} f(a) conj(f(b)) prod_i gcd(a_i, b_i)^(2 alpha) / (a_i b_i)^alpha
//
// The random model draws independent uniform phases X(p) on the unit circle
// for every prime and extends them completely multiplicatively.

#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "mppc/energy.hpp"

namespace mppc {

using Complex = std::complex<double>;

/// A finitely supported f : N^d -> C. Repeated tuples are merged by adding
/// their weights.
class WeightedSupport {
 public:
  WeightedSupport(std::size_t dim, std::vector<std::uint64_t> coords, std::vector<Complex> weights);

  /// Real weight 1 on every tuple.
  static WeightedSupport indicator(std::size_t dim, std::vector<std::uint64_t> coords);

  [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
  /// Support cardinality K.
  [[nodiscard]] std::size_t size() const noexcept { return weights_.size(); }
  [[nodiscard]] std::span<const std::uint64_t> point(std::size_t i) const noexcept {
    return {coords_.data() + i * dim_, dim_};
  }
  [[nodiscard]] Complex weight(std::size_t i) const noexcept { return weights_[i]; }
  [[nodiscard]] std::uint64_t max_coordinate() const noexcept;

  [[nodiscard]] double norm1() const noexcept { return norm1_; }
  /// ||f||_2^2.
  [[nodiscard]] double norm2_squared() const noexcept { return norm2_sq_; }
  /// Recomputes both norms and compares with the cached values.
  [[nodiscard]] bool norms_consistent() const;

 private:
  std::size_t dim_;
  std::vector<std::uint64_t> coords_;
  std::vector<Complex> weights_;
  double norm1_ = 0.0;
  double norm2_sq_ = 0.0;
};

/// S_f(d; alpha) for alpha in (0, 1]. O(K^2 d).
[[nodiscard]] double gcd_sum(const WeightedSupport& f, double alpha);

/// Kernel prod_i gcd(a_i, b_i)^(2 alpha) / (a_i b_i)^alpha.
[[nodiscard]] double gcd_kernel(std::span<const std::uint64_t> a,
                                std::span<const std::uint64_t> b, double alpha);

/// Folds R_N(v) over sign patterns onto f(|v_1|, ..., |v_d|), keeping only v
/// with every component nonzero. Throws when nothing remains.
[[nodiscard]] WeightedSupport fold_representations(const RepresentationTable& table);

/// S_f(d; alpha) with f = fold_representations(table).
[[nodiscard]] double gcd_sum_from_representations(const RepresentationTable& table, double alpha);

/// Marginal table over a subset of components: D'(u) = sum of D(v) over v
/// whose selected components equal u.
[[nodiscard]] RepresentationTable marginal(const RepresentationTable& table,
                                           std::span<const std::size_t> components);

class RandomMultiplicativeSample {
 public:
  RandomMultiplicativeSample(std::uint64_t seed, std::uint64_t cutoff);

  [[nodiscard]] std::uint64_t cutoff() const noexcept { return cutoff_; }
  /// X(n) for 1 <= n <= cutoff.
  [[nodiscard]] Complex operator()(std::uint64_t n) const;
  /// (p, X(p)) for every prime p <= cutoff, increasing in p.
  [[nodiscard]] const std::vector<std::pair<std::uint64_t, Complex>>& prime_phases() const noexcept {
    return primes_;
  }

 private:
  std::uint64_t cutoff_;
  std::vector<std::pair<std::uint64_t, Complex>> primes_;
  std::vector<Complex> values_;
};

[[nodiscard]] RandomMultiplicativeSample sample_random_multiplicative(std::uint64_t seed,
                                                                      std::uint64_t cutoff);

/// sum_{n <= M} X(n) / n^alpha.
[[nodiscard]] Complex zeta_trunc(const RandomMultiplicativeSample& sample, double alpha,
                                 std::uint64_t M);

/// Riemann zeta for real s > 1 by Euler-Maclaurin (absolute error < 1e-12).
[[nodiscard]] double riemann_zeta(double s);

struct MonteCarloEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

/// Mean and standard error of the mean, summed in index order.
[[nodiscard]] MonteCarloEstimate summarize(std::span<const double> values);

struct Eq0Report {
  MonteCarloEstimate zeta_product;      // E|zeta_X zeta_Y D|^2
  double exact_truncated_rhs = 0.0;
  double untruncated_rhs = 0.0;         // zeta(2 alpha)^2 S_f(2; alpha)
  MonteCarloEstimate dirichlet_moment;  // E|D|^2
  double f_norm2_squared = 0.0;
  std::size_t samples = 0;
  std::uint64_t M = 0;
  double alpha = 0.0;
  std::uint64_t seed = 0;
};

/// Exact value of E|zeta_X^(M) zeta_Y^(M) D(X, Y)|^2 for d = 2 supports.
[[nodiscard]] double eq0_truncated_rhs(const WeightedSupport& f, double alpha, std::uint64_t M);

/// Monte Carlo over `samples` independent (X, Y) pairs; sample i is seeded
/// from (seed, i) so the result does not depend on `workers`.
[[nodiscard]] Eq0Report verify_eq0(const WeightedSupport& f, double alpha, std::uint64_t M,
                                   std::size_t samples, std::uint64_t seed,
                                   std::size_t workers = 1);

struct MomentRow {
  double l = 0.0;
  MonteCarloEstimate moment;  // E|zeta_X^(M)(alpha)|^(2l)
};

[[nodiscard]] std::vector<MomentRow> moment_growth_probe(double alpha,
                                                         std::span<const double> l_values,
                                                         std::size_t samples, std::uint64_t M,
                                                         std::uint64_t seed,
                                                         std::size_t workers = 1);

}  // namespace mppc
