#pragma once

namespace wavediv {

// log Gamma(x) for x > 0, Lanczos approximation (g = 7, 9 terms),
// relative accuracy around 1e-13.
double lgamma_lanczos(double x);

// Regularized incomplete beta I_x(a,b), continued-fraction evaluation.
double incomplete_beta(double a, double b, double x);

// Regularized lower incomplete gamma P(a,x).
double incomplete_gamma_p(double a, double x);

// Standard normal CDF.
double normal_cdf(double x);

// Inverse standard normal CDF (Wichura's AS 241, double precision).
double normal_quantile(double p);

} // namespace wavediv
