#pragma once

#include <array>
#include <cstdint>

#include "dsmooth/noise_moments.hpp"

namespace dsmooth {

/// Pascal triangle up to kMaxMomentOrder; every entry fits exactly in int64.
inline constexpr auto kBinomial = [] {
  std::array<std::array<std::int64_t, kMaxMomentOrder + 1>, kMaxMomentOrder + 1> c{};
  for (int n = 0; n <= kMaxMomentOrder; ++n) {
    c[n][0] = 1;
    for (int k = 1; k <= n; ++k) c[n][k] = c[n - 1][k - 1] + (k <= n - 1 ? c[n - 1][k] : 0);
  }
  return c;
}();

inline constexpr std::int64_t binomial(int n, int k) { return kBinomial[n][k]; }

}  // namespace dsmooth
