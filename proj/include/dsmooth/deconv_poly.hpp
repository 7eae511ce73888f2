#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "dsmooth/noise_moments.hpp"

namespace dsmooth {

/// Monic polynomial P_i with E(P_i(Y + Z)) = E(Y^i) for Z independent of Y.
/// Coefficient of x^j is stored at index j.
class DeconvPolynomial {
 public:
  DeconvPolynomial() = default;
  explicit DeconvPolynomial(std::vector<double> coeffs);

  int order() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  std::span<const double> coeffs() const noexcept { return coeffs_; }

  double operator()(double x) const noexcept {
    double acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

 private:
  std::vector<double> coeffs_{1.0};
};

/// Horner evaluation.
inline double evaluate(const DeconvPolynomial& poly, double x) noexcept { return poly(x); }

/// P_1..P_K for one noise law, built once and shared read-only.
class PolynomialBasis {
 public:
  PolynomialBasis() = default;
  PolynomialBasis(NoiseMomentSpec noise, int max_order);

  int max_order() const noexcept { return static_cast<int>(polys_.size()) - 1; }
  const NoiseMomentSpec& noise() const noexcept { return noise_; }

  /// 1-based: basis[i] is P_i. basis[0] is the constant 1.
  const DeconvPolynomial& operator[](int order) const { return polys_.at(order); }

  /// out[i-1] = P_i(x) for i = 1..out.size().
  void evaluate_all(double x, std::span<double> out) const noexcept;

 private:
  NoiseMomentSpec noise_;
  std::vector<DeconvPolynomial> polys_;
  // Row-major (max_order x (max_order + 1)) copy of the coefficients for
  // the hot evaluation loop.
  std::vector<double> dense_;
};

/// P_i(x) = x^i - sum_{j<i} C(i,j) z_{i-j} P_j(x), P_0 = 1.
PolynomialBasis build_basis(const NoiseMomentSpec& noise, int max_order);

struct UnbiasednessCheck {
  double sample_mean = 0.0;
  double standard_error = 0.0;
  /// |sample_mean - latent_moment|
  double deviation = 0.0;
};

/// Monte Carlo check that P_order(Y + Z) averages to E(Y^order). `sampler`
/// returns independent (Y, Z) pairs; `latent_moment` is the analytic E(Y^order).
template <class Sampler>
UnbiasednessCheck moment_unbiasedness_check(const NoiseMomentSpec& noise, Sampler&& sampler, int order,
                                            std::int64_t n_draws, double latent_moment) {
  if (n_draws < 2) throw std::invalid_argument("need at least two draws");
  const PolynomialBasis basis = build_basis(noise, order);
  const DeconvPolynomial& p = basis[order];
  double mean = 0.0, m2 = 0.0;
  for (std::int64_t i = 0; i < n_draws; ++i) {
    const auto [y, z] = sampler();
    const double v = p(y + z);
    const double delta = v - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (v - mean);
  }
  const double var = m2 / static_cast<double>(n_draws - 1);
  return {mean, std::sqrt(var / static_cast<double>(n_draws)), std::abs(mean - latent_moment)};
}

}  // namespace dsmooth
