#include "mppc/sequences.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

#include "mppc/errors.hpp"

namespace mppc {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

template <class T>
T parse_number(std::string_view text, std::string_view what) {
  T value{};
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || text.empty())
    throw std::invalid_argument("cannot parse " + std::string(what) + " from '" +
                                std::string(text) + "'");
  return value;
}

std::string format_double(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

void validate(const SequenceSpec& spec) {
  if (const auto* p = std::get_if<Power>(&spec); p && p->exponent < 2)
    throw std::invalid_argument("power family requires exponent >= 2");
  if (const auto* f = std::get_if<FloorNLogA>(&spec)) {
    if (!(f->A >= 1.0 && f->A <= 2.0))
      throw std::invalid_argument("[n log^A n] family requires A in [1,2]");
    if (f->start < 2) throw std::invalid_argument("[n log^A n] family requires start >= 2");
  }
}

std::uint64_t checked_power(std::uint64_t n, unsigned exponent) {
  unsigned __int128 v = 1;
  for (unsigned i = 0; i < exponent; ++i) {
    v *= n;
    if (v > kMaxSequenceValue)
      throw std::overflow_error("n^" + std::to_string(exponent) + " exceeds 2^63 at n=" +
                                std::to_string(n));
  }
  return static_cast<std::uint64_t>(v);
}

std::uint64_t floor_n_log_a(std::uint64_t n, double A) {
  const long double x = static_cast<long double>(n);
  const long double v = std::floor(x * std::pow(std::log(x), static_cast<long double>(A)));
  if (v > static_cast<long double>(kMaxSequenceValue))
    throw std::overflow_error("[n log^A n] exceeds 2^63 at n=" + std::to_string(n));
  return static_cast<std::uint64_t>(v);
}

}  // namespace

std::uint64_t default_floor_log_start(double A) {
  std::uint64_t n = 2;
  while (floor_n_log_a(n, A) == 0) ++n;
  return n;
}

SequenceSpec parse_sequence_spec(std::string_view text) {
  text = trim(text);
  if (text == "n") return Identity{};
  if (text.starts_with("file:")) {
    auto path = text.substr(5);
    if (path.empty()) throw std::invalid_argument("file: family requires a path");
    return Explicit{std::filesystem::path(std::string(path))};
  }
  if (text.starts_with("n^")) {
    const auto l = parse_number<unsigned>(text.substr(2), "exponent");
    if (l == 1) return Identity{};
    SequenceSpec spec = Power{l};
    validate(spec);
    return spec;
  }
  if (text.starts_with("[")) {
    FloorNLogA f;
    std::optional<std::uint64_t> start;
    std::string_view body = text;
    if (auto at = text.rfind('@'); at != std::string_view::npos && at > text.rfind(']')) {
      start = parse_number<std::uint64_t>(trim(text.substr(at + 1)), "start index");
      body = trim(text.substr(0, at));
    }
    if (!body.ends_with("]")) throw std::invalid_argument("unterminated '[' in family");
    body = trim(body.substr(1, body.size() - 2));
    if (!body.starts_with("n") || !body.ends_with("n"))
      throw std::invalid_argument("expected '[n log^A n]', got '" + std::string(text) + "'");
    body = trim(body.substr(1, body.size() - 2));
    if (!body.starts_with("log")) throw std::invalid_argument("expected 'log' in family");
    body = trim(body.substr(3));
    if (!body.empty()) {
      if (!body.starts_with("^")) throw std::invalid_argument("expected '^A' after 'log'");
      f.A = parse_number<double>(trim(body.substr(1)), "log exponent");
    }
    if (!(f.A >= 1.0 && f.A <= 2.0))
      throw std::invalid_argument("[n log^A n] family requires A in [1,2]");
    f.start = start ? *start : default_floor_log_start(f.A);
    SequenceSpec spec = f;
    validate(spec);
    return spec;
  }
  throw std::invalid_argument("unknown sequence family '" + std::string(text) + "'");
}

std::vector<SequenceSpec> parse_family(std::string_view text) {
  std::vector<SequenceSpec> out;
  std::size_t depth = 0;
  std::size_t begin = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i < text.size() && text[i] == '[') ++depth;
    if (i < text.size() && text[i] == ']' && depth > 0) --depth;
    if (i == text.size() || (text[i] == ',' && depth == 0)) {
      out.push_back(parse_sequence_spec(text.substr(begin, i - begin)));
      begin = i + 1;
    }
  }
  return out;
}

std::string to_string(const SequenceSpec& spec) {
  struct Visitor {
    std::string operator()(const Identity&) const { return "n"; }
    std::string operator()(const Power& p) const { return "n^" + std::to_string(p.exponent); }
    std::string operator()(const FloorNLogA& f) const {
      std::string s = "[n log^" + format_double(f.A) + " n]";
      if (f.start != default_floor_log_start(f.A)) s += "@" + std::to_string(f.start);
      return s;
    }
    std::string operator()(const Explicit& e) const { return "file:" + e.path.string(); }
  };
  return std::visit(Visitor{}, spec);
}

SequenceData::SequenceData(SequenceSpec spec, std::vector<std::uint64_t> values)
    : spec_(std::move(spec)), values_(std::move(values)) {
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (values_[i] > kMaxSequenceValue)
      throw std::overflow_error("sequence value at index " + std::to_string(i) +
                                " exceeds 2^63");
    if (values_[i] == 0)
      throw MonotonicityError(i, "sequence value at index " + std::to_string(i) +
                                     " is not a natural number");
    if (i > 0 && values_[i] <= values_[i - 1])
      throw MonotonicityError(i, "sequence '" + to_string(spec_) +
                                     "' is not strictly increasing at index " +
                                     std::to_string(i));
  }
}

SequenceData SequenceData::prefix(std::size_t n) const {
  if (n > values_.size()) throw std::invalid_argument("prefix longer than sequence");
  return SequenceData(spec_, std::vector<std::uint64_t>(values_.begin(), values_.begin() + n));
}

std::vector<std::uint64_t> read_sequence_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open sequence file '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();

  std::vector<std::uint64_t> values;
  std::size_t line_no = 1;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    const std::string_view line(text.data() + pos, end - pos);
    if (line.empty())
      throw std::invalid_argument(path.string() + ":" + std::to_string(line_no) + ": blank line");
    for (char c : line)
      if (c < '0' || c > '9')
        throw std::invalid_argument(path.string() + ":" + std::to_string(line_no) +
                                    ": expected a base-10 integer");
    values.push_back(parse_number<std::uint64_t>(line, "sequence value"));
    pos = end + 1;
    ++line_no;
  }
  return values;
}

SequenceData generate(const SequenceSpec& spec, std::size_t N) {
  if (N == 0) throw std::invalid_argument("sequence length N must be >= 1");
  validate(spec);
  std::vector<std::uint64_t> values;
  if (const auto* e = std::get_if<Explicit>(&spec)) {
    values = read_sequence_file(e->path);
    if (values.size() < N)
      throw std::invalid_argument("sequence file '" + e->path.string() + "' has " +
                                  std::to_string(values.size()) + " terms, need " +
                                  std::to_string(N));
    values.resize(N);
    return SequenceData(spec, std::move(values));
  }
  values.reserve(N);
  for (std::uint64_t i = 0; i < N; ++i) {
    if (std::holds_alternative<Identity>(spec)) {
      values.push_back(i + 1);
    } else if (const auto* p = std::get_if<Power>(&spec)) {
      values.push_back(checked_power(i + 1, p->exponent));
    } else {
      const auto& f = std::get<FloorNLogA>(spec);
      values.push_back(floor_n_log_a(f.start + i, f.A));
    }
  }
  return SequenceData(spec, std::move(values));
}

std::vector<TorusPoint> orbit_prefix(std::span<const SequenceData> seqs, const TorusPoint& alpha,
                                     std::size_t count) {
  if (seqs.empty()) throw std::invalid_argument("orbit needs at least one sequence");
  if (seqs.size() != alpha.dim())
    throw std::invalid_argument("orbit: " + std::to_string(seqs.size()) +
                                " sequences but alpha has dimension " +
                                std::to_string(alpha.dim()));
  for (const auto& s : seqs)
    if (s.size() < count) throw std::invalid_argument("orbit: sequence shorter than N");
  std::vector<TorusPoint> points(count, TorusPoint(alpha.dim()));
  for (std::size_t i = 0; i < alpha.dim(); ++i) {
    const auto values = seqs[i].values();
    for (std::size_t n = 0; n < count; ++n) points[n][i] = frac_mul(values[n], alpha[i]);
  }
  return points;
}

std::vector<TorusPoint> orbit(std::span<const SequenceData> seqs, const TorusPoint& alpha) {
  if (seqs.empty()) throw std::invalid_argument("orbit needs at least one sequence");
  for (const auto& s : seqs)
    if (s.size() != seqs.front().size())
      throw std::invalid_argument("orbit: sequences have different lengths");
  return orbit_prefix(seqs, alpha, seqs.front().size());
}

}  // namespace mppc
