#include "dsmooth/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace dsmooth::linalg {

bool cholesky_in_place(std::span<double> a, int k) noexcept {
  for (int j = 0; j < k; ++j) {
    double d = a[j * k + j];
    for (int t = 0; t < j; ++t) d -= a[j * k + t] * a[j * k + t];
    if (!(d > 0.0) || !std::isfinite(d)) return false;
    const double ljj = std::sqrt(d);
    a[j * k + j] = ljj;
    for (int i = j + 1; i < k; ++i) {
      double s = a[i * k + j];
      for (int t = 0; t < j; ++t) s -= a[i * k + t] * a[j * k + t];
      a[i * k + j] = s / ljj;
    }
  }
  return true;
}

void forward_substitute(std::span<const double> lower, std::span<double> b, int k) noexcept {
  for (int i = 0; i < k; ++i) {
    double s = b[i];
    for (int t = 0; t < i; ++t) s -= lower[i * k + t] * b[t];
    b[i] = s / lower[i * k + i];
  }
}

std::vector<double> symmetric_eigenvalues(std::span<const double> a_in, int k) {
  std::vector<double> a(a_in.begin(), a_in.begin() + static_cast<std::ptrdiff_t>(k) * k);
  auto at = [&](int i, int j) -> double& { return a[i * k + j]; };

  for (int sweep = 0; sweep < 100; ++sweep) {
    bool rotated = false;
    for (int p = 0; p < k - 1; ++p) {
      for (int q = p + 1; q < k; ++q) {
        const double apq = at(p, q);
        if (apq == 0.0) continue;
        // Negligible relative to the diagonal: drop it. Keeps small
        // eigenvalues of graded matrices accurate.
        if (std::abs(apq) <= 1e-18 * std::sqrt(std::abs(at(p, p) * at(q, q)))) {
          at(p, q) = at(q, p) = 0.0;
          continue;
        }
        rotated = true;
        const double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
        const double t = std::abs(theta) > 1e150
                             ? 0.5 / theta
                             : std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int r = 0; r < k; ++r) {
          const double arp = at(r, p), arq = at(r, q);
          at(r, p) = c * arp - s * arq;
          at(r, q) = s * arp + c * arq;
        }
        for (int r = 0; r < k; ++r) {
          const double apr = at(p, r), aqr = at(q, r);
          at(p, r) = c * apr - s * aqr;
          at(q, r) = s * apr + c * aqr;
        }
      }
    }
    if (!rotated) break;
  }
  std::vector<double> ev(k);
  for (int i = 0; i < k; ++i) ev[i] = at(i, i);
  std::sort(ev.begin(), ev.end());
  return ev;
}

}  // namespace dsmooth::linalg
