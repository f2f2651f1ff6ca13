#pragma once

#include <functional>
#include <span>
#include <vector>

namespace arps {

double sample_mean(std::span<const double> xs);
/// Unbiased sample variance; 0 for fewer than two values.
double sample_variance(std::span<const double> xs);
double sample_covariance(std::span<const double> xs, std::span<const double> ys);

/// sup_t |F_n(t) - cdf(t)|.
double ks_statistic(std::span<const double> samples, const std::function<double(double)>& cdf);
/// sup_t |F_a(t) - F_b(t)|.
double ks_statistic(std::span<const double> a, std::span<const double> b);

/// Asymptotic Kolmogorov critical values, c(alpha) = sqrt(-ln(alpha/2) / 2).
double ks_critical_value(std::size_t n, double alpha);
double ks_critical_value(std::size_t n, std::size_t m, double alpha);

}  // namespace arps
