#pragma once

#include <bit>
#include <cstdint>
#include <initializer_list>

namespace mppc {

/// SplitMix64 finalizer; a bijection on 64-bit words.
[[nodiscard]] constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Child seed for a labelled sub-stream of `master`. Equal label lists give
/// equal seeds regardless of the order in which streams are consumed.
[[nodiscard]] constexpr std::uint64_t derive_seed(
    std::uint64_t master, std::initializer_list<std::uint64_t> labels) noexcept {
  std::uint64_t h = splitmix64(master);
  for (std::uint64_t label : labels) h = splitmix64(h ^ splitmix64(label + 0x632BE59BD9B4E019ULL));
  return h;
}

[[nodiscard]] inline std::uint64_t double_bits(double x) noexcept {
  return std::bit_cast<std::uint64_t>(x);
}

}  // namespace mppc
