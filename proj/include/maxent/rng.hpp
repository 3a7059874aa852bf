#pragma once

#include <array>
#include <cstdint>

namespace maxent {

// Counter-based generator (Philox 2x64, 10 rounds). Each (key, counter)
// pair maps independently to 128 output bits, so any sample/component can
// be generated in isolation and results cannot depend on how work is
// partitioned across threads.
struct Philox2x64 {
  static constexpr std::uint64_t kMultiplier = 0xD2B74407B1CE6E93ull;
  static constexpr std::uint64_t kKeyBump = 0x9E3779B97F4A7C15ull;

  static std::array<std::uint64_t, 2> block(std::uint64_t key, std::uint64_t ctr0,
                                            std::uint64_t ctr1) {
    std::uint64_t c0 = ctr0, c1 = ctr1, k = key;
    for (int round = 0; round < 10; ++round) {
      const unsigned __int128 prod =
          static_cast<unsigned __int128>(c0) * kMultiplier;
      const auto lo = static_cast<std::uint64_t>(prod);
      const auto hi = static_cast<std::uint64_t>(prod >> 64);
      c0 = hi ^ k ^ c1;
      c1 = lo;
      k += kKeyBump;
    }
    return {c0, c1};
  }
};

/// Uniform draw in the open interval (0, 1): top 53 bits, centered on the
/// lattice so 0 and 1 are unreachable. Safe to feed to an inverse CDF.
inline double u64_to_unit_open(std::uint64_t bits) {
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

/// One uniform (0,1) variate for sample `index`, component `component`.
inline double uniform_draw(std::uint64_t seed, std::uint64_t index,
                           std::uint64_t component) {
  return u64_to_unit_open(Philox2x64::block(seed, index, component)[0]);
}

inline constexpr const char* kRngAlgorithm = "philox2x64-10";

}  // namespace maxent
