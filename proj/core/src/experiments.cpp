#include "mppc/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "mppc/parallel.hpp"
#include "mppc/seeding.hpp"

namespace mppc {

namespace {

std::vector<SequenceData> materialize(std::span<const SequenceSpec> family, std::size_t N) {
  std::vector<SequenceData> seqs;
  seqs.reserve(family.size());
  for (const auto& spec : family) seqs.push_back(generate(spec, N));
  return seqs;
}

std::pair<double, double> mean_and_variance(std::span<const double> values) {
  long double sum = 0.0L;
  for (double v : values) sum += v;
  const long double mean = sum / static_cast<long double>(values.size());
  long double ss = 0.0L;
  for (double v : values) ss += (v - mean) * (v - mean);
  const long double var =
      values.size() > 1 ? ss / static_cast<long double>(values.size() - 1) : 0.0L;
  return {static_cast<double>(mean), static_cast<double>(var)};
}

double fit_slope(std::span<const double> xs, std::span<const double> ys) {
  const auto n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double denom = n * sxx - sx * sx;
  return denom == 0.0 ? 0.0 : (n * sxy - sx * sy) / denom;
}

}  // namespace

std::uint64_t cell_seed(std::uint64_t master, std::size_t N, double s, std::size_t k) {
  return derive_seed(master, {static_cast<std::uint64_t>(N), double_bits(s),
                              static_cast<std::uint64_t>(k)});
}

void validate(const ExperimentConfig& config) {
  const std::size_t d = config.family.size();
  if (d == 0) throw std::invalid_argument("experiment family is empty");
  if (d > kMaxTorusDim)
    throw std::invalid_argument("experiment family has more than " +
                                std::to_string(kMaxTorusDim) + " sequences");
  if (config.K == 0) throw std::invalid_argument("K must be >= 1");
  if (config.N_values.empty() || config.s_values.empty())
    throw std::invalid_argument("experiment needs at least one N and one s");
  for (auto N : config.N_values) {
    if (N < 2) throw std::invalid_argument("every N must be >= 2");
    for (double s : config.s_values) {
      if (!(s > 0.0)) throw std::invalid_argument("every s must be > 0");
      if (!(pair_threshold(s, N, d) < 0.5))
        throw std::invalid_argument("threshold s/N^(1/d) >= 1/2 for s=" + format_real(s) +
                                    ", N=" + std::to_string(N));
    }
  }
}

std::vector<double> sample_statistics(const ExperimentConfig& config,
                                      std::span<const SequenceData> seqs, std::size_t N,
                                      double s) {
  const std::size_t d = seqs.size();
  std::vector<double> stats(config.K);
  parallel_for(config.K, config.workers, [&](std::size_t k) {
    const std::uint64_t seed = cell_seed(config.seed, N, s, k);
    const auto points = orbit_prefix(seqs, sample_alpha(seed, d), N);
    const auto result = ppc_grid(points, s, config.norm);
    if (config.naive_spot_check && N <= config.naive_check_max_N &&
        splitmix64(seed) % 10 == 0) {
      const auto check = ppc_naive(points, s, config.norm);
      if (check.near_pairs != result.near_pairs)
        throw std::logic_error("grid and naive pair counts disagree at N=" + std::to_string(N));
    }
    stats[k] = result.statistic;
  });
  return stats;
}

std::vector<ExperimentRow> run_convergence(const ExperimentConfig& config) {
  validate(config);
  const std::size_t d = config.family.size();
  const std::size_t max_N = *std::max_element(config.N_values.begin(), config.N_values.end());
  const auto seqs = materialize(config.family, max_N);

  std::vector<ExperimentRow> rows;
  for (std::size_t N : config.N_values) {
    for (double s : config.s_values) {
      const auto start = std::chrono::steady_clock::now();
      const auto stats = sample_statistics(config, seqs, N, s);
      const auto [mean, var] = mean_and_variance(stats);
      ExperimentRow row;
      row.N = N;
      row.s = s;
      row.K = config.K;
      row.mean_R = mean;
      row.var_R = var;
      row.limit = ppc_limit(s, d, config.norm);
      row.expectation = row.limit * static_cast<double>(N - 1) / static_cast<double>(N);
      if (config.timing)
        row.seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      rows.push_back(row);
    }
  }
  return rows;
}

VarianceDecay run_variance_decay(const ExperimentConfig& config) {
  if (config.K < 30) throw std::invalid_argument("variance decay needs K >= 30");
  VarianceDecay out;
  out.rows = run_convergence(config);
  for (double s : config.s_values) {
    std::vector<double> xs, ys;
    for (const auto& row : out.rows) {
      if (row.s != s || !(row.var_R > 0.0)) continue;
      xs.push_back(std::log(static_cast<double>(row.N)));
      ys.push_back(std::log(row.var_R));
    }
    out.slopes.emplace_back(s, xs.size() >= 2 ? fit_slope(xs, ys) : 0.0);
  }
  return out;
}

Counterexample run_counterexample(double alpha, double s, std::span<const std::size_t> N_values) {
  if (N_values.empty()) throw std::invalid_argument("counterexample needs at least one N");
  if (!(s > 0.0)) throw std::invalid_argument("s must be > 0");
  Counterexample out;
  out.alpha = alpha;
  out.s = s;
  const TorusPoint a{frac_of_real(alpha)};
  const std::size_t max_N = *std::max_element(N_values.begin(), N_values.end());
  const std::vector<SequenceData> seqs{generate(Identity{}, max_N)};

  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t N : N_values) {
    const auto points = orbit_prefix(seqs, a, N);
    const auto result = ppc_grid(points, s, NormKind::Sup);
    std::vector<std::uint64_t> nums(N);
    for (std::size_t n = 0; n < N; ++n) nums[n] = points[n][0].numerator;
    std::sort(nums.begin(), nums.end());
    const auto distinct =
        static_cast<std::size_t>(std::unique(nums.begin(), nums.end()) - nums.begin());

    CounterexampleRow row{N, result.statistic, result.limit, distinct};
    out.degenerate = out.degenerate || distinct < N;
    lo = std::min(lo, row.R);
    hi = std::max(hi, row.R);
    out.max_deviation = std::max(out.max_deviation, std::fabs(row.R - row.limit));
    out.rows.push_back(row);
  }
  out.dispersion = hi - lo;
  return out;
}

std::vector<EnergyScanRow> run_energy_scan(std::span<const SequenceSpec> family,
                                           std::span<const std::size_t> N_values,
                                           std::span<const ComparisonFunction> comparison,
                                           const EnergyOptions& options) {
  if (family.empty()) throw std::invalid_argument("energy scan family is empty");
  if (N_values.empty()) throw std::invalid_argument("energy scan needs at least one N");
  if (!std::is_sorted(N_values.begin(), N_values.end()))
    throw std::invalid_argument("energy scan N grid must be ascending");
  const auto seqs = materialize(family, N_values.back());
  std::vector<EnergyScanRow> rows;
  for (std::size_t N : N_values) {
    std::vector<SequenceData> prefix;
    for (const auto& s : seqs) prefix.push_back(s.prefix(N));
    rows.push_back({energy_bound_report(prefix, comparison, options)});
  }
  return rows;
}

std::string format_real(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(text);
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void write_csv(std::ostream& out, std::span<const ExperimentRow> rows) {
  out << "N,s,K,mean_R,var_R,limit,expectation,seconds\n";
  for (const auto& r : rows)
    out << r.N << ',' << format_real(r.s) << ',' << r.K << ',' << format_real(r.mean_R) << ','
        << format_real(r.var_R) << ',' << format_real(r.limit) << ','
        << format_real(r.expectation) << ',' << format_real(r.seconds) << '\n';
}

void write_csv(std::ostream& out, const Counterexample& result) {
  out << "N,s,R,limit,distinct_points\n";
  for (const auto& r : result.rows)
    out << r.N << ',' << format_real(result.s) << ',' << format_real(r.R) << ','
        << format_real(r.limit) << ',' << r.distinct_points << '\n';
}

void write_csv(std::ostream& out, std::span<const EnergyScanRow> rows,
               std::span<const ComparisonFunction> comparison) {
  out << "N,E";
  for (const auto& g : comparison) out << ',' << csv_field("E/" + g.name);
  out << '\n';
  for (const auto& row : rows) {
    out << row.report.N << ',' << row.report.E;
    for (const auto& [name, ratio] : row.report.ratios) out << ',' << format_real(ratio);
    out << '\n';
  }
}

}  // namespace mppc
