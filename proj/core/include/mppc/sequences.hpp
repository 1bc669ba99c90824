// Integer sequence families and their orbits on the torus.

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mppc/fixedpoint.hpp"

namespace mppc {

struct Identity {
  friend bool operator==(const Identity&, const Identity&) = default;
};

/// n^exponent, exponent >= 2.
struct Power {
  unsigned exponent = 2;
  friend bool operator==(const Power&, const Power&) = default;
};

/// [n (ln n)^A] for n = start, start + 1, ...
struct FloorNLogA {
  double A = 1.0;
  std::uint64_t start = 2;
  friend bool operator==(const FloorNLogA&, const FloorNLogA&) = default;
};

/// Sequence read from a text file, one base-10 integer per line.
struct Explicit {
  std::filesystem::path path;
  friend bool operator==(const Explicit&, const Explicit&) = default;
};

using SequenceSpec = std::variant<Identity, Power, FloorNLogA, Explicit>;

/// First n >= 2 with [n (ln n)^A] >= 1: 2 for A below about 1.889, else 3.
/// Used when `[n log^A n]` is written without an explicit `@start`.
[[nodiscard]] std::uint64_t default_floor_log_start(double A);

/// Parses the family grammar: `n`, `n^l`, `[n log^A n]`, `[n log n]`,
/// optionally `[n log^A n]@start`, and `file:PATH`.
[[nodiscard]] SequenceSpec parse_sequence_spec(std::string_view text);

/// Parses a comma-separated list of sequence specs.
[[nodiscard]] std::vector<SequenceSpec> parse_family(std::string_view text);

/// Canonical text for a spec; parse_sequence_spec(to_string(s)) == s.
[[nodiscard]] std::string to_string(const SequenceSpec& spec);

/// Raised when a materialized sequence is not strictly increasing.
class MonotonicityError : public std::invalid_argument {
 public:
  MonotonicityError(std::size_t index, const std::string& what)
      : std::invalid_argument(what), index_(index) {}
  /// Zero-based index of the first value that is zero or not above its predecessor.
  [[nodiscard]] std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

inline constexpr std::uint64_t kMaxSequenceValue = std::uint64_t{1} << 63;

/// The first N terms of a family: strictly increasing naturals <= 2^63.
class SequenceData {
 public:
  /// Validates monotonicity and range; throws MonotonicityError or std::overflow_error.
  SequenceData(SequenceSpec spec, std::vector<std::uint64_t> values);

  [[nodiscard]] const SequenceSpec& spec() const noexcept { return spec_; }
  [[nodiscard]] std::span<const std::uint64_t> values() const noexcept { return values_; }
  [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
  [[nodiscard]] std::uint64_t operator[](std::size_t i) const noexcept { return values_[i]; }

  /// First n terms.
  [[nodiscard]] SequenceData prefix(std::size_t n) const;

 private:
  SequenceSpec spec_;
  std::vector<std::uint64_t> values_;
};

/// Materializes the first N terms. Throws on N == 0, non-monotone output,
/// values beyond 2^63, or unreadable/malformed explicit files.
[[nodiscard]] SequenceData generate(const SequenceSpec& spec, std::size_t N);

/// Reads an explicit sequence file (all lines).
[[nodiscard]] std::vector<std::uint64_t> read_sequence_file(const std::filesystem::path& path);

/// x_n = ({a_n^(1) alpha_1}, ..., {a_n^(d) alpha_d}) for n = 1..N.
[[nodiscard]] std::vector<TorusPoint> orbit(std::span<const SequenceData> seqs,
                                            const TorusPoint& alpha);

/// Same as orbit() but uses only the first `count` terms of every sequence.
[[nodiscard]] std::vector<TorusPoint> orbit_prefix(std::span<const SequenceData> seqs,
                                                   const TorusPoint& alpha, std::size_t count);

}  // namespace mppc
