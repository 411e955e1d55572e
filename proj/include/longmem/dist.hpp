#pragma once

namespace longmem {

// Regularized incomplete gamma functions P(a,x) and Q(a,x) = 1 - P(a,x),
// relative error around 1e-14 over the statistical range used here.
double gamma_p(double a, double x);
double gamma_q(double a, double x);

// Upper-tail probability of a chi-square(k) variate at x.
double chi2_upper_tail(double x, double k);

// Standard normal CDF and its inverse (Wichura's AS 241, PPND16).
double normal_cdf(double z);
double normal_quantile(double p);

// Two-sided normal p-value for a z statistic.
double normal_pvalue_two_sided(double z);

// Regularized incomplete beta I_x(a,b) and its inverse in x.
double inc_beta(double a, double b, double x);
double inc_beta_inv(double a, double b, double p);

// Quantile of the Student-t distribution with nu > 0 degrees of freedom.
double student_t_quantile(double p, double nu);

// Log-density at x of the unit-variance (standardized) Student-t with
// nu > 2 degrees of freedom.
double std_t_logpdf(double x, double nu);

// E|X| for the standardized Student-t; sqrt(2/pi) in the Gaussian limit.
double std_t_abs_mean(double nu);

// E|Z| for the standard normal.
double normal_abs_mean();

}  // namespace longmem
