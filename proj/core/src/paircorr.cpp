#include "mppc/paircorr.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace mppc {

namespace {

// Keeps the dense cell table at most a small multiple of N.
constexpr std::uint64_t kCellsPerPoint = 4;
constexpr std::uint64_t kMinCells = 64;

std::size_t validate_points(std::span<const TorusPoint> points, double s) {
  if (points.size() < 2) throw std::invalid_argument("pair correlation needs N >= 2 points");
  if (!(s > 0.0) || !std::isfinite(s)) throw std::invalid_argument("s must be a positive real");
  const std::size_t dim = points.front().dim();
  for (const auto& p : points)
    if (p.dim() != dim) throw std::invalid_argument("points differ in dimension");
  return dim;
}

PairCountResult make_result(std::uint64_t near_pairs, std::size_t N, double s, std::size_t dim,
                            NormKind norm) {
  PairCountResult r;
  r.near_pairs = near_pairs;
  r.N = N;
  r.s = s;
  r.statistic = static_cast<double>(near_pairs) / static_cast<double>(N);
  r.limit = ppc_limit(s, dim, norm);
  r.expectation = r.limit * static_cast<double>(N - 1) / static_cast<double>(N);
  r.norm = norm;
  return r;
}

std::uint64_t cells_per_axis(double threshold, std::size_t N, std::size_t dim) {
  // Side 1/m must exceed the threshold strictly, so that every pair passing
  // the binary64 predicate lies in the same or adjacent cells.
  const double inv = 1.0 / (threshold * (1.0 + 1e-12));
  auto m = static_cast<std::uint64_t>(std::floor(inv));
  const std::uint64_t budget = std::max<std::uint64_t>(kMinCells, kCellsPerPoint * N);
  auto cap = static_cast<std::uint64_t>(
      std::floor(std::pow(static_cast<double>(budget), 1.0 / static_cast<double>(dim))));
  m = std::clamp<std::uint64_t>(m, 1, std::max<std::uint64_t>(cap, 1));
  return m;
}

std::uint64_t cell_coord(Frac64 x, std::uint64_t m) noexcept {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(x.numerator) * m) >> 64);
}

}  // namespace

std::string_view to_string(NormKind norm) noexcept {
  return norm == NormKind::Sup ? "sup" : "two";
}

NormKind parse_norm(std::string_view text) {
  if (text == "sup" || text == "inf" || text == "infinity") return NormKind::Sup;
  if (text == "two" || text == "2" || text == "euclid") return NormKind::Two;
  throw std::invalid_argument("unknown norm '" + std::string(text) + "' (use sup or two)");
}

double pair_threshold(double s, std::size_t N, std::size_t dim) {
  return s / std::pow(static_cast<double>(N), 1.0 / static_cast<double>(dim));
}

NearPredicate::NearPredicate(double threshold, std::size_t dim, NormKind norm)
    : threshold_(threshold), threshold_sq_(threshold * threshold), dim_(dim), norm_(norm) {
  if (!(threshold < 0.5))
    throw std::invalid_argument("threshold s/N^(1/d) = " + std::to_string(threshold) +
                                " must be < 1/2");
}

PairCountResult ppc_naive(std::span<const TorusPoint> points, double s, NormKind norm) {
  const std::size_t dim = validate_points(points, s);
  const std::size_t N = points.size();
  const NearPredicate near(pair_threshold(s, N, dim), dim, norm);
  std::uint64_t unordered = 0;
  for (std::size_t m = 0; m < N; ++m)
    for (std::size_t n = m + 1; n < N; ++n)
      if (near(points[m], points[n])) ++unordered;
  return make_result(2 * unordered, N, s, dim, norm);
}

PairCountResult ppc_grid(std::span<const TorusPoint> points, double s, NormKind norm) {
  const std::size_t dim = validate_points(points, s);
  const std::size_t N = points.size();
  const NearPredicate near(pair_threshold(s, N, dim), dim, norm);
  const std::uint64_t m = cells_per_axis(near.threshold(), N, dim);

  std::uint64_t total_cells = 1;
  for (std::size_t i = 0; i < dim; ++i) total_cells *= m;

  std::vector<std::uint64_t> cell_of(N);
  for (std::size_t n = 0; n < N; ++n) {
    std::uint64_t idx = 0;
    for (std::size_t i = dim; i-- > 0;) idx = idx * m + cell_coord(points[n][i], m);
    cell_of[n] = idx;
  }

  // Counting sort into cells.
  std::vector<std::uint64_t> start(total_cells + 1, 0);
  for (auto c : cell_of) ++start[c + 1];
  for (std::uint64_t c = 0; c < total_cells; ++c) start[c + 1] += start[c];
  std::vector<TorusPoint> sorted(N);
  {
    std::vector<std::uint64_t> fill(start.begin(), start.end() - 1);
    for (std::size_t n = 0; n < N; ++n) sorted[fill[cell_of[n]]++] = points[n];
  }

  std::size_t offsets = 1;
  for (std::size_t i = 0; i < dim; ++i) offsets *= 3;

  std::vector<std::uint64_t> coord(dim);
  std::vector<std::uint64_t> neighbours;
  neighbours.reserve(offsets);
  std::uint64_t ordered = 0;

  for (std::uint64_t cell = 0; cell < total_cells; ++cell) {
    if (start[cell] == start[cell + 1]) continue;
    std::uint64_t rest = cell;
    for (std::size_t i = 0; i < dim; ++i) {
      coord[i] = rest % m;
      rest /= m;
    }
    // With m <= 2 several offsets wrap onto the same cell; dedupe so each
    // ordered pair is examined exactly once.
    neighbours.clear();
    for (std::size_t k = 0; k < offsets; ++k) {
      std::size_t code = k;
      std::uint64_t idx = 0;
      std::uint64_t stride = 1;
      for (std::size_t i = 0; i < dim; ++i) {
        const auto delta = static_cast<std::int64_t>(code % 3) - 1;
        code /= 3;
        const std::uint64_t c = (coord[i] + m + static_cast<std::uint64_t>(delta)) % m;
        idx += c * stride;
        stride *= m;
      }
      neighbours.push_back(idx);
    }
    std::sort(neighbours.begin(), neighbours.end());
    neighbours.erase(std::unique(neighbours.begin(), neighbours.end()), neighbours.end());

    for (std::uint64_t a = start[cell]; a < start[cell + 1]; ++a) {
      const TorusPoint& p = sorted[a];
      for (std::uint64_t other : neighbours) {
        for (std::uint64_t b = start[other]; b < start[other + 1]; ++b) {
          if (b != a && near(p, sorted[b])) ++ordered;
        }
      }
    }
  }
  return make_result(ordered, N, s, dim, norm);
}

double unit_ball_volume(std::size_t dim) {
  const double half = static_cast<double>(dim) / 2.0;
  return std::pow(std::numbers::pi, half) / std::tgamma(half + 1.0);
}

double ppc_limit(double s, std::size_t dim, NormKind norm) {
  if (dim == 0) throw std::invalid_argument("dimension must be >= 1");
  const double sd = std::pow(s, static_cast<double>(dim));
  if (norm == NormKind::Sup) return std::pow(2.0, static_cast<double>(dim)) * sd;
  return unit_ball_volume(dim) * sd;
}

}  // namespace mppc
