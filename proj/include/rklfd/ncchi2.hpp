#pragma once

namespace rklfd {

/// Regularized lower incomplete gamma function P(a, x).
double gamma_p(double a, double x);

/// CDF of the noncentral chi-square distribution with d degrees of freedom
/// and noncentrality lambda, evaluated by the Poisson-weighted central
/// chi-square series.
double ncchi2_cdf(double y, double d, double lambda);

/// Inverse CDF to absolute tolerance 1e-10 in probability, by bracketing
/// and bisection/secant.
double ncchi2_quantile(double p, double d, double lambda);

} // namespace rklfd
