#pragma once

namespace engage {

// Regularized incomplete beta I_x(a, b) for a, b > 0 and x in [0, 1],
// evaluated by Lentz's continued fraction. Absolute error is below 1e-12 for
// the parameter ranges used by the correlation tests.
double regularized_incomplete_beta(double a, double b, double x);

// Two-tailed p-value of Student's t statistic with `dof` degrees of freedom.
double student_t_two_tailed_p(double t, double dof);

// p-value of a Pearson r from n pairs: t = r*sqrt((n-2)/(1-r^2)), n-2 dof.
// Requires n >= 3 and |r| < 1.
double pearson_p_value(double r, double n);

}  // namespace engage
