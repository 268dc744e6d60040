#pragma once
#include <cstddef>
#include <vector>

namespace sehs {

double mean(const std::vector<double>& x);
double variance(const std::vector<double>& x);  // population variance
double pearson(const std::vector<double>& x, const std::vector<double>& y);

// Ordinary least squares y = a + b*x with a two-sided t-test on b != 0.
struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double t_stat = 0.0;
  double p_value = 1.0;  // two-sided
  std::size_t n = 0;
};
SlopeFit fit_slope(const std::vector<double>& x, const std::vector<double>& y);

// Regularized incomplete beta function I_x(a, b), used for the t CDF.
double incomplete_beta(double a, double b, double x);
double student_t_sf_two_sided(double t, double dof);  // P(|T| >= t)

}  // namespace sehs
