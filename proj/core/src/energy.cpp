#include "mppc/energy.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <type_traits>

#include "mppc/seeding.hpp"

namespace mppc {

namespace {

using u128 = unsigned __int128;

template <class Key>
struct Item {
  Key key;
  std::uint32_t weight;
};

std::uint64_t hash_key(std::uint64_t k) noexcept { return splitmix64(k); }

template <std::size_t D>
std::uint64_t hash_key(const std::array<std::int64_t, D>& k) noexcept {
  std::uint64_t h = 0x51ED270B27E3A1F9ULL;
  for (auto c : k) h = splitmix64(h ^ static_cast<std::uint64_t>(c));
  return h;
}

// Calls on_run(key, total_weight) once per distinct key. `enumerate(emit)`
// must call emit(key, weight) for every item; it is invoked once per pass.
template <class Key, class Enumerate, class OnRun>
void for_each_run(std::uint64_t total_items, std::size_t budget, Enumerate&& enumerate,
                  OnRun&& on_run) {
  budget = std::max<std::size_t>(budget, 1);
  const std::uint64_t passes = std::max<std::uint64_t>(1, (total_items + budget - 1) / budget);
  std::vector<Item<Key>> buffer;
  buffer.reserve(static_cast<std::size_t>(
      std::min<std::uint64_t>(total_items, budget + budget / 8 + 16)));

  for (std::uint64_t pass = 0; pass < passes; ++pass) {
    buffer.clear();
    enumerate([&](const Key& key, std::uint32_t weight) {
      if (passes == 1 || hash_key(key) % passes == pass) buffer.push_back({key, weight});
    });
    std::sort(buffer.begin(), buffer.end(),
              [](const Item<Key>& a, const Item<Key>& b) { return a.key < b.key; });
    std::size_t i = 0;
    while (i < buffer.size()) {
      std::uint64_t total = 0;
      std::size_t j = i;
      for (; j < buffer.size() && buffer[j].key == buffer[i].key; ++j) total += buffer[j].weight;
      on_run(buffer[i].key, total);
      i = j;
    }
  }
}

std::uint64_t checked_u64(u128 v, const char* what) {
  if (v > static_cast<u128>(std::numeric_limits<std::int64_t>::max()))
    throw std::overflow_error(std::string(what) + " exceeds 2^63");
  return static_cast<std::uint64_t>(v);
}

void check_energy_size(std::size_t N) {
  if (N == 0) throw std::invalid_argument("energy needs N >= 1");
  if (N > kMaxEnergyN)
    throw std::overflow_error("energy with N = " + std::to_string(N) +
                              " may exceed 2^63; limit is " + std::to_string(kMaxEnergyN));
}

std::size_t check_joint(std::span<const SequenceData> seqs) {
  if (seqs.empty()) throw std::invalid_argument("joint energy needs at least one sequence");
  if (seqs.size() > kMaxEnergyDim)
    throw std::invalid_argument("joint energy supports at most " +
                                std::to_string(kMaxEnergyDim) + " sequences");
  const std::size_t N = seqs.front().size();
  for (const auto& s : seqs)
    if (s.size() != N) throw std::invalid_argument("sequences differ in length");
  check_energy_size(N);
  return N;
}

template <class F>
decltype(auto) with_dim(std::size_t dim, F&& f) {
  switch (dim) {
    case 1: return f(std::integral_constant<std::size_t, 1>{});
    case 2: return f(std::integral_constant<std::size_t, 2>{});
    case 3: return f(std::integral_constant<std::size_t, 3>{});
    case 4: return f(std::integral_constant<std::size_t, 4>{});
    case 5: return f(std::integral_constant<std::size_t, 5>{});
    case 6: return f(std::integral_constant<std::size_t, 6>{});
    default: throw std::invalid_argument("unsupported dimension " + std::to_string(dim));
  }
}

// Difference vectors a_n - a_m over n > m (first component then positive).
template <std::size_t D, class OnRun>
void difference_runs(std::span<const SequenceData> seqs, std::size_t budget, OnRun&& on_run) {
  const std::size_t N = seqs.front().size();
  std::array<std::span<const std::uint64_t>, D> cols;
  for (std::size_t i = 0; i < D; ++i) cols[i] = seqs[i].values();
  const std::uint64_t total = static_cast<std::uint64_t>(N) * (N - 1) / 2;
  using Key = std::array<std::int64_t, D>;
  for_each_run<Key>(
      total, budget,
      [&](auto&& emit) {
        Key key;
        for (std::size_t n = 1; n < N; ++n) {
          for (std::size_t m = 0; m < n; ++m) {
            for (std::size_t i = 0; i < D; ++i)
              key[i] = static_cast<std::int64_t>(cols[i][n] - cols[i][m]);
            emit(key, 1);
          }
        }
      },
      std::forward<OnRun>(on_run));
}

}  // namespace

std::uint64_t RepresentationTable::at(std::span<const std::int64_t> v) const {
  if (v.size() != dim_) throw std::invalid_argument("difference vector has wrong dimension");
  std::size_t lo = 0;
  std::size_t hi = counts_.size();
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    const auto k = key(mid);
    if (std::lexicographical_compare(k.begin(), k.end(), v.begin(), v.end()))
      lo = mid + 1;
    else
      hi = mid;
  }
  if (lo < counts_.size() && std::equal(v.begin(), v.end(), key(lo).begin())) return counts_[lo];
  return 0;
}

std::uint64_t RepresentationTable::representation(std::span<const std::int64_t> v) const {
  for (auto c : v)
    if (c == 0) return 0;
  return at(v);
}

std::uint64_t RepresentationTable::sum_of_squares() const {
  u128 total = 0;
  for (auto c : counts_) total += static_cast<u128>(c) * c;
  return checked_u64(total, "sum of squared representation counts");
}

void RepresentationTable::append(std::span<const std::int64_t> v, std::uint64_t count) {
  if (v.size() != dim_) throw std::invalid_argument("difference vector has wrong dimension");
  keys_.insert(keys_.end(), v.begin(), v.end());
  counts_.push_back(count);
}

void RepresentationTable::finalize() {
  std::vector<std::size_t> order(counts_.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto ka = key(a);
    const auto kb = key(b);
    return std::lexicographical_compare(ka.begin(), ka.end(), kb.begin(), kb.end());
  });
  std::vector<std::int64_t> keys;
  std::vector<std::uint64_t> counts;
  keys.reserve(keys_.size());
  counts.reserve(counts_.size());
  for (auto i : order) {
    const auto k = key(i);
    if (!counts.empty() && std::equal(k.begin(), k.end(), keys.end() - static_cast<long>(dim_))) {
      counts.back() += counts_[i];
      continue;
    }
    keys.insert(keys.end(), k.begin(), k.end());
    counts.push_back(counts_[i]);
  }
  keys_ = std::move(keys);
  counts_ = std::move(counts);
}

std::uint64_t additive_energy(const SequenceData& A, const EnergyOptions& options) {
  const std::size_t N = A.size();
  check_energy_size(N);
  const auto a = A.values();
  u128 energy = 0;
  const std::uint64_t total = static_cast<std::uint64_t>(N) * (N + 1) / 2;
  // Unordered pairs n <= m stand for two ordered pairs unless n == m. Sums fit
  // in 64 bits because at most one term of a strictly increasing sequence
  // equals 2^63.
  for_each_run<std::uint64_t>(
      total, options.pass_budget,
      [&](auto&& emit) {
        for (std::size_t n = 0; n < N; ++n) {
          emit(a[n] + a[n], 1);
          for (std::size_t m = n + 1; m < N; ++m) emit(a[n] + a[m], 2);
        }
      },
      [&](std::uint64_t, std::uint64_t r) { energy += static_cast<u128>(r) * r; });
  return checked_u64(energy, "additive energy");
}

std::uint64_t joint_additive_energy(std::span<const SequenceData> seqs,
                                    const EnergyOptions& options) {
  const std::size_t N = check_joint(seqs);
  u128 off_diagonal = 0;
  with_dim(seqs.size(), [&](auto D) {
    difference_runs<D()>(seqs, options.pass_budget, [&](const auto&, std::uint64_t c) {
      off_diagonal += static_cast<u128>(c) * c;
    });
  });
  // D(0) = N; D(v) = D(-v).
  return checked_u64(static_cast<u128>(N) * N + 2 * off_diagonal, "joint additive energy");
}

RepresentationTable representation_counts(std::span<const SequenceData> seqs,
                                          const EnergyOptions& options) {
  const std::size_t N = check_joint(seqs);
  const std::size_t dim = seqs.size();
  RepresentationTable table(dim, N);
  std::vector<std::int64_t> v(dim);
  with_dim(dim, [&](auto D) {
    difference_runs<D()>(seqs, options.pass_budget, [&](const auto& key, std::uint64_t c) {
      for (std::size_t i = 0; i < dim; ++i) v[i] = key[i];
      table.append(v, c);
      for (std::size_t i = 0; i < dim; ++i) v[i] = -key[i];
      table.append(v, c);
    });
  });
  std::fill(v.begin(), v.end(), 0);
  table.append(v, N);
  table.finalize();
  return table;
}

std::uint64_t count_Jl(const SequenceData& f, const SequenceData& g, std::size_t l) {
  if (f.size() != g.size()) throw std::invalid_argument("count_Jl: sequences differ in length");
  const std::size_t N = f.size();
  if (l == 0) throw std::invalid_argument("count_Jl: l must be >= 1");
  if (l >= N) return 0;
  const auto fv = f.values();
  const auto gv = g.values();
  std::uint64_t count = 0;
  // 0-based: x < x+l <= z < y <= N-1. f is strictly increasing, so for fixed
  // x the solution y of the first equation moves monotonically with z.
  for (std::size_t x = 0; x + l < N; ++x) {
    const std::uint64_t step = fv[x + l] - fv[x];
    std::size_t y = x + l + 1;
    for (std::size_t z = x + l; z + 1 < N; ++z) {
      const std::uint64_t target = fv[z] + step;
      if (y <= z) y = z + 1;
      while (y < N && fv[y] < target) ++y;
      if (y == N) break;
      if (fv[y] != target) continue;
      const auto lhs = static_cast<u128>(gv[x]) + gv[y];
      const auto rhs = static_cast<u128>(gv[x + l]) + gv[z];
      if (lhs == rhs) ++count;
    }
  }
  return count;
}

std::uint64_t vinogradov_J2d(std::uint64_t N, unsigned degree, const EnergyOptions& options) {
  if (N == 0 || degree == 0) throw std::invalid_argument("vinogradov_J2d needs N, d >= 1");
  check_energy_size(static_cast<std::size_t>(N));
  {
    u128 top = 1;
    for (unsigned i = 0; i < degree; ++i) {
      top *= N;
      if (2 * top > static_cast<u128>(std::numeric_limits<std::int64_t>::max()))
        throw std::overflow_error("power sums 2 N^d exceed 2^63");
    }
  }
  u128 total_sq = 0;
  with_dim(degree, [&](auto D) {
    using Key = std::array<std::int64_t, D()>;
    std::vector<Key> powers(N);
    for (std::uint64_t x = 0; x < N; ++x) {
      std::int64_t p = 1;
      for (std::size_t i = 0; i < D(); ++i) {
        p *= static_cast<std::int64_t>(x + 1);
        powers[x][i] = p;
      }
    }
    for_each_run<Key>(
        N * (N + 1) / 2, options.pass_budget,
        [&](auto&& emit) {
          Key key;
          for (std::uint64_t a = 0; a < N; ++a) {
            for (std::uint64_t b = a; b < N; ++b) {
              for (std::size_t i = 0; i < D(); ++i) key[i] = powers[a][i] + powers[b][i];
              emit(key, a == b ? 1 : 2);
            }
          }
        },
        [&](const Key&, std::uint64_t r) { total_sq += static_cast<u128>(r) * r; });
  });
  return checked_u64(total_sq, "J_{2,d}(N)");
}

double ComparisonFunction::operator()(double N) const {
  return std::pow(N, n_exponent) * std::pow(std::log(N), log_exponent);
}

namespace {

double parse_exponent(std::string_view text) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty())
    throw std::invalid_argument("bad exponent '" + std::string(text) + "'");
  return v;
}

std::string_view strip(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  return s;
}

}  // namespace

ComparisonFunction parse_comparison(std::string_view text) {
  text = strip(text);
  ComparisonFunction fn;
  fn.name = std::string(text);
  if (!text.starts_with("N^"))
    throw std::invalid_argument("comparison must look like N^p or N^p*log^q, got '" +
                                std::string(text) + "'");
  std::string_view rest = text.substr(2);
  const auto op = rest.find_first_of("*/");
  fn.n_exponent = parse_exponent(strip(rest.substr(0, op)));
  if (op == std::string_view::npos) return fn;
  const double sign = rest[op] == '/' ? -1.0 : 1.0;
  std::string_view log_part = strip(rest.substr(op + 1));
  if (log_part.starts_with("logN"))
    log_part.remove_prefix(4);
  else if (log_part.starts_with("log"))
    log_part.remove_prefix(3);
  else
    throw std::invalid_argument("expected log factor in '" + std::string(text) + "'");
  log_part = strip(log_part);
  if (log_part.empty()) {
    fn.log_exponent = sign;
  } else if (log_part.starts_with("^")) {
    fn.log_exponent = sign * parse_exponent(strip(log_part.substr(1)));
  } else {
    throw std::invalid_argument("expected ^q after log in '" + std::string(text) + "'");
  }
  return fn;
}

std::vector<ComparisonFunction> parse_comparisons(std::string_view text) {
  std::vector<ComparisonFunction> out;
  std::size_t begin = 0;
  while (begin <= text.size()) {
    auto end = text.find(',', begin);
    if (end == std::string_view::npos) end = text.size();
    if (auto piece = strip(text.substr(begin, end - begin)); !piece.empty())
      out.push_back(parse_comparison(piece));
    begin = end + 1;
  }
  return out;
}

EnergyReport energy_bound_report(std::span<const SequenceData> seqs,
                                 std::span<const ComparisonFunction> comparison,
                                 const EnergyOptions& options) {
  EnergyReport report;
  report.N = check_joint(seqs);
  report.E = seqs.size() == 1 ? additive_energy(seqs.front(), options)
                              : joint_additive_energy(seqs, options);
  const auto N = static_cast<std::uint64_t>(report.N);
  report.trivial_lower = N * N;
  report.trivial_upper = N * N * N;
  const double e = static_cast<double>(report.E);
  for (const auto& g : comparison)
    report.ratios.emplace_back(g.name, e / g(static_cast<double>(report.N)));
  return report;
}

}  // namespace mppc
