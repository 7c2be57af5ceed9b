#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace flevy::stats {

struct MeanEstimate {
  double mean = 0.0;
  double std_error = 0.0;  // sample stdev / sqrt(n)
  std::size_t n = 0;
};

MeanEstimate mean_and_stderr(std::span<const double> xs);

double sample_variance(std::span<const double> xs);

// Ordinary least squares slope of y on x.
double ols_slope(std::span<const double> x, std::span<const double> y);

struct KsResult {
  double statistic = 0.0;  // sup |F_a - F_b|
  double p_value = 1.0;
};

// Two-sample Kolmogorov-Smirnov test with the asymptotic Kolmogorov
// distribution and the usual small-sample correction of the argument.
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

// Q_KS(lambda) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 lambda^2).
double kolmogorov_q(double lambda);

}  // namespace flevy::stats
