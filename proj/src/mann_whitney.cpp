#include "dsmooth/mann_whitney.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "dsmooth/dist.hpp"

namespace dsmooth {

MWResult mann_whitney(std::span<const double> x, std::span<const double> u) {
  if (x.empty() || u.empty()) throw std::invalid_argument("Mann-Whitney needs two nonempty samples");
  const double n = static_cast<double>(x.size());
  const double m = static_cast<double>(u.size());

  // (value, from_x)
  std::vector<std::pair<double, bool>> pooled;
  pooled.reserve(x.size() + u.size());
  for (double v : x) pooled.emplace_back(v, true);
  for (double v : u) pooled.emplace_back(v, false);
  std::sort(pooled.begin(), pooled.end(), [](const auto& a, const auto& b) { return a.first < b.first; });

  double rank_sum_x = 0.0;
  double tie_term = 0.0;  // sum over tie groups of t^3 - t
  for (std::size_t i = 0; i < pooled.size();) {
    std::size_t j = i;
    while (j < pooled.size() && pooled[j].first == pooled[i].first) ++j;
    const double t = static_cast<double>(j - i);
    const double midrank = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j));
    for (std::size_t r = i; r < j; ++r)
      if (pooled[r].second) rank_sum_x += midrank;
    tie_term += t * t * t - t;
    i = j;
  }

  MWResult out;
  out.u_statistic = rank_sum_x - n * (n + 1.0) / 2.0;
  const double mean = n * m / 2.0;
  const double total = n + m;
  const double variance = n * m / 12.0 * ((total + 1.0) - tie_term / (total * (total - 1.0)));
  if (!(variance > 0.0)) {
    // Every value tied: no evidence either way.
    out.z_score = 0.0;
    out.p_value = 1.0;
    return out;
  }
  const double diff = out.u_statistic - mean;
  const double corrected = std::max(0.0, std::abs(diff) - 0.5);
  out.z_score = std::copysign(corrected / std::sqrt(variance), diff);
  if (corrected == 0.0) out.z_score = 0.0;
  out.p_value = std::min(1.0, 2.0 * std_normal_cdf(-std::abs(out.z_score)));
  return out;
}

}  // namespace dsmooth
