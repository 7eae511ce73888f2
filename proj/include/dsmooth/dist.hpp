#pragma once

namespace dsmooth {

/// Regularized lower incomplete gamma P(a, x).
double regularized_gamma_p(double a, double x);

/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x), computed
/// directly so small tail probabilities keep their relative precision.
double regularized_gamma_q(double a, double x);

double chi2_cdf(int df, double x);

/// Survival function 1 - chi2_cdf; this is the p-value of an observed statistic.
double chi2_sf(int df, double x);

/// Inverse of chi2_cdf for p in (0, 1).
double chi2_quantile(int df, double p);

double std_normal_cdf(double x);

}  // namespace dsmooth
