// Additive energy, joint additive energy and representation counts.
//
// Counting is done over sorted runs: every ordered index pair contributes a
// key (a sum or a difference vector), keys are sorted in bounded-size passes
// partitioned by hash, and run lengths are squared and summed. Memory is
// bounded by EnergyOptions::pass_budget keys regardless of N.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mppc/sequences.hpp"

namespace mppc {

struct EnergyOptions {
  /// Keys held in memory per pass; more pairs than this are split into
  /// several hash-partitioned passes.
  std::size_t pass_budget = std::size_t{1} << 24;
};

/// Largest N accepted by the energy counters (keeps N^3 below 2^63).
inline constexpr std::size_t kMaxEnergyN = 2'000'000;
/// Largest number of sequences in a joint energy.
inline constexpr std::size_t kMaxEnergyDim = 6;

/// Sparse D(v) = #{(n, m) : a_n^(i) - a_m^(i) = v_i for all i}, all v
/// including zero, sorted lexicographically by v.
class RepresentationTable {
 public:
  RepresentationTable(std::size_t dim, std::size_t N) : dim_(dim), N_(N) {}

  [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
  [[nodiscard]] std::size_t N() const noexcept { return N_; }
  [[nodiscard]] std::size_t size() const noexcept { return counts_.size(); }

  [[nodiscard]] std::span<const std::int64_t> key(std::size_t i) const noexcept {
    return {keys_.data() + i * dim_, dim_};
  }
  [[nodiscard]] std::uint64_t count(std::size_t i) const noexcept { return counts_[i]; }

  /// D(v); zero when v does not occur.
  [[nodiscard]] std::uint64_t at(std::span<const std::int64_t> v) const;

  /// R_N(v) of the variance bound: D(v) restricted to v whose
  /// components are all nonzero (for such v, n != m automatically).
  [[nodiscard]] std::uint64_t representation(std::span<const std::int64_t> v) const;

  /// sum_v D(v)^2.
  [[nodiscard]] std::uint64_t sum_of_squares() const;

  /// Entries are appended in any order and sorted by finalize().
  void append(std::span<const std::int64_t> v, std::uint64_t count);
  void finalize();

 private:
  std::size_t dim_;
  std::size_t N_;
  std::vector<std::int64_t> keys_;
  std::vector<std::uint64_t> counts_;
};

/// #{(a, b, c, d) in A^4 : a + b = c + d} as sum over sigma of r_+(sigma)^2.
[[nodiscard]] std::uint64_t additive_energy(const SequenceData& A,
                                            const EnergyOptions& options = {});

/// Number of index quadruples solving a_n + a_m = a_k + a_l in every
/// component, computed as sum_v D(v)^2.
[[nodiscard]] std::uint64_t joint_additive_energy(std::span<const SequenceData> seqs,
                                                  const EnergyOptions& options = {});

[[nodiscard]] RepresentationTable representation_counts(std::span<const SequenceData> seqs,
                                                        const EnergyOptions& options = {});

/// Solutions (x, y, z) of f(x)+f(y) = f(x+l)+f(z), g(x)+g(y) = g(x+l)+g(z)
/// with 1 <= x < x+l <= z < y <= N (indices into the arrays, 1-based).
[[nodiscard]] std::uint64_t count_Jl(const SequenceData& f, const SequenceData& g,
                                     std::size_t l);

/// J_{2,d}(N): solutions of x1^i + x2^i = y1^i + y2^i, 1 <= i <= d, over [1, N]^4.
[[nodiscard]] std::uint64_t vinogradov_J2d(std::uint64_t N, unsigned degree,
                                           const EnergyOptions& options = {});

/// g(N) = N^p (log N)^q. Text form: `N^p`, `N^p*log^q` (q may be negative).
struct ComparisonFunction {
  std::string name;
  double n_exponent = 2.0;
  double log_exponent = 0.0;

  [[nodiscard]] double operator()(double N) const;
};

[[nodiscard]] ComparisonFunction parse_comparison(std::string_view text);
/// Comma-separated list of comparison functions.
[[nodiscard]] std::vector<ComparisonFunction> parse_comparisons(std::string_view text);

struct EnergyReport {
  std::uint64_t E = 0;
  std::size_t N = 0;
  std::uint64_t trivial_lower = 0;  // N^2
  std::uint64_t trivial_upper = 0;  // N^3
  std::vector<std::pair<std::string, double>> ratios;  // E / g(N)

  [[nodiscard]] bool trivial_bounds_hold() const noexcept {
    return trivial_lower <= E && E <= trivial_upper;
  }
};

/// Energy of a single sequence, or the joint energy when seqs.size() > 1,
/// with E / g(N) for each comparison g.
[[nodiscard]] EnergyReport energy_bound_report(std::span<const SequenceData> seqs,
                                               std::span<const ComparisonFunction> comparison,
                                               const EnergyOptions& options = {});

}  // namespace mppc
