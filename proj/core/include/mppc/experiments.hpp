// Monte Carlo experiments over random dilations alpha.
//
// Every (N, s, sample) cell draws its own alpha from a seed derived from the
// master seed, so results are identical for any worker count.

#pragma once

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "mppc/energy.hpp"
#include "mppc/paircorr.hpp"
#include "mppc/sequences.hpp"

namespace mppc {

struct ExperimentConfig {
  std::vector<SequenceSpec> family;
  NormKind norm = NormKind::Sup;
  std::vector<double> s_values{0.5, 1.0, 2.0};
  std::vector<std::size_t> N_values{1000, 10000, 100000};
  std::size_t K = 20;
  std::uint64_t seed = 0;
  std::size_t workers = 1;
  /// Record wall time per row; off by default so output is reproducible.
  bool timing = false;
  /// Recount about 10% of the sample cells with ppc_naive (only for N up to
  /// naive_check_max_N) and throw std::logic_error on any mismatch.
  bool naive_spot_check = false;
  std::size_t naive_check_max_N = 20000;
};

struct ExperimentRow {
  std::size_t N = 0;
  double s = 0.0;
  std::size_t K = 0;
  double mean_R = 0.0;
  double var_R = 0.0;
  double limit = 0.0;
  double expectation = 0.0;
  double seconds = 0.0;
};

/// Seed of the alpha used for sample k of cell (N, s).
[[nodiscard]] std::uint64_t cell_seed(std::uint64_t master, std::size_t N, double s,
                                      std::size_t k);

/// Throws std::invalid_argument when a threshold reaches 1/2, K is zero, or
/// the family is empty or too wide.
void validate(const ExperimentConfig& config);

/// R statistics of every sample of one (N, s) cell, in sample order.
[[nodiscard]] std::vector<double> sample_statistics(const ExperimentConfig& config,
                                                    std::span<const SequenceData> seqs,
                                                    std::size_t N, double s);

[[nodiscard]] std::vector<ExperimentRow> run_convergence(const ExperimentConfig& config);

struct VarianceDecay {
  std::vector<ExperimentRow> rows;
  /// Least-squares slope of log var_R against log N, one per s value.
  std::vector<std::pair<double, double>> slopes;
};

/// Requires K >= 30.
[[nodiscard]] VarianceDecay run_variance_decay(const ExperimentConfig& config);

struct CounterexampleRow {
  std::size_t N = 0;
  double R = 0.0;
  double limit = 0.0;
  std::size_t distinct_points = 0;
};

struct Counterexample {
  double alpha = 0.0;
  double s = 0.0;
  std::vector<CounterexampleRow> rows;
  double dispersion = 0.0;     // max R - min R
  double max_deviation = 0.0;  // max |R - 2s|
  /// Some orbit repeats points (rational alpha with N beyond the period).
  bool degenerate = false;
};

/// R(s, ({n alpha}), N) along N_values for a single fixed alpha.
[[nodiscard]] Counterexample run_counterexample(double alpha, double s,
                                                std::span<const std::size_t> N_values);

struct EnergyScanRow {
  EnergyReport report;
};

/// energy_bound_report for the first N terms of the family, N ascending.
[[nodiscard]] std::vector<EnergyScanRow> run_energy_scan(
    std::span<const SequenceSpec> family, std::span<const std::size_t> N_values,
    std::span<const ComparisonFunction> comparison, const EnergyOptions& options = {});

/// Shortest decimal text that reads back to the same double.
[[nodiscard]] std::string format_real(double x);

void write_csv(std::ostream& out, std::span<const ExperimentRow> rows);
void write_csv(std::ostream& out, const Counterexample& result);
void write_csv(std::ostream& out, std::span<const EnergyScanRow> rows,
               std::span<const ComparisonFunction> comparison);

/// RFC-4180 field quoting.
[[nodiscard]] std::string csv_field(std::string_view text);

}  // namespace mppc
