#include "dsmooth/deconv_poly.hpp"

#include "dsmooth/combinatorics.hpp"

namespace dsmooth {

DeconvPolynomial::DeconvPolynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) throw std::invalid_argument("polynomial needs at least one coefficient");
}

PolynomialBasis::PolynomialBasis(NoiseMomentSpec noise, int max_order) : noise_(std::move(noise)) {
  if (max_order < 1 || max_order > kMaxMomentOrder)
    throw std::invalid_argument("basis order must be in [1, 20]");
  const std::vector<double> z = noise_.raw_moments(max_order);

  polys_.reserve(max_order + 1);
  polys_.emplace_back(std::vector<double>{1.0});
  for (int i = 1; i <= max_order; ++i) {
    std::vector<double> c(i + 1, 0.0);
    c[i] = 1.0;
    for (int j = 0; j < i; ++j) {
      const double w = static_cast<double>(binomial(i, j)) * z[i - j];
      const auto pj = polys_[j].coeffs();
      for (int t = 0; t <= j; ++t) c[t] -= w * pj[t];
    }
    polys_.emplace_back(std::move(c));
  }

  const int width = max_order + 1;
  dense_.assign(static_cast<std::size_t>(max_order) * width, 0.0);
  for (int i = 1; i <= max_order; ++i) {
    const auto c = polys_[i].coeffs();
    for (int t = 0; t <= i; ++t) dense_[(i - 1) * width + t] = c[t];
  }
}

void PolynomialBasis::evaluate_all(double x, std::span<double> out) const noexcept {
  const int width = max_order() + 1;
  const int k = static_cast<int>(out.size());
  // Powers once, then a dot product per order.
  double powers[kMaxMomentOrder + 1];
  powers[0] = 1.0;
  for (int t = 1; t <= k; ++t) powers[t] = powers[t - 1] * x;
  for (int i = 1; i <= k; ++i) {
    const double* row = dense_.data() + (i - 1) * width;
    double acc = 0.0;
    for (int t = i; t >= 0; --t) acc += row[t] * powers[t];
    out[i - 1] = acc;
  }
}

PolynomialBasis build_basis(const NoiseMomentSpec& noise, int max_order) { return {noise, max_order}; }

}  // namespace dsmooth
