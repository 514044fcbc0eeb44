#pragma once

namespace postcolor {

// Distribution helpers used by the testing and stopping-rule code.
// Self-contained: rational approximation for the normal quantile and a
// continued-fraction regularized incomplete beta for the F distribution.

double normal_cdf(double x);
double normal_quantile(double p);  // p in (0,1)

double incomplete_beta(double a, double b, double x);  // I_x(a,b)

double f_cdf(double x, double d1, double d2);
double f_quantile(double p, double d1, double d2);  // p in (0,1)

}  // namespace postcolor
