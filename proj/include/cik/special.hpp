// Scalar special functions backing the density formulas and the test
// oracles: regularized incomplete beta/gamma, normal and Student-t CDFs.

#pragma once

namespace cik {

double log_beta(double a, double b);

// I_x(a, b), regularized incomplete beta; x in [0,1].
double regularized_incomplete_beta(double a, double b, double x);

// P(a, x) and Q(a, x) = 1 - P(a, x), regularized incomplete gamma.
double regularized_gamma_p(double a, double x);
double regularized_gamma_q(double a, double x);

double normal_cdf(double x);

// CDF of the Student-t with `dof` degrees of freedom, location 0, unit scale.
double student_t_cdf(double t, double dof);
// Same with scale^2 = scale2 (t / sqrt(scale2) is standard).
double student_t_cdf(double t, double dof, double scale2);

// Survival function of the chi-square with k degrees of freedom.
double chi_square_sf(double x, double k);

}  // namespace cik
