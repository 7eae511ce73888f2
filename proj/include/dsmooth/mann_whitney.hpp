#pragma once

#include <span>

namespace dsmooth {

struct MWResult {
  /// Number of pairs with x_i > u_j, ties counted one half.
  double u_statistic = 0.0;
  double z_score = 0.0;
  /// Two-sided, normal approximation with tie-corrected variance and
  /// continuity correction.
  double p_value = 1.0;
};

/// Mann-Whitney rank-sum test. Throws std::invalid_argument on an empty sample.
MWResult mann_whitney(std::span<const double> x, std::span<const double> u);

}  // namespace dsmooth
