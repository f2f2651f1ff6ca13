#include "arps/inverse_gaussian.hpp"

#include <numbers>

#include "arps/specfun.hpp"

namespace arps {

InverseGaussian::InverseGaussian(InverseGaussianParams params) : params_(params) {
    if (!(params.m > 0.0 && std::isfinite(params.m))) throw DomainError("inverse Gaussian mean m must be > 0");
    if (!(params.lambda > 0.0 && std::isfinite(params.lambda)))
        throw DomainError("inverse Gaussian shape lambda must be > 0");
}

InverseGaussian InverseGaussian::from_linear_boundary(double intercept, double slope) {
    if (!(intercept < 0.0 && slope > 0.0))
        throw DomainError("linear boundary must start below zero and increase");
    return InverseGaussian({-intercept / slope, intercept * intercept});
}

double InverseGaussian::pdf(double t) const {
    if (!(t > 0.0)) return 0.0;
    const double m = params_.m, lam = params_.lambda;
    const double dev = t - m;
    return std::sqrt(lam / (2.0 * std::numbers::pi * t * t * t)) * std::exp(-lam * dev * dev / (2.0 * m * m * t));
}

double InverseGaussian::cdf(double t) const {
    if (!(t > 0.0)) return 0.0;
    if (std::isinf(t)) return 1.0;
    const double m = params_.m, lam = params_.lambda;
    const double root = std::sqrt(lam / t);
    const double first = normal_cdf(root * (t / m - 1.0));
    // e^{2 lam/m} Phi(-v) = 0.5 e^{2 lam/m - v^2/2} erfcx(v/sqrt2), finite for large lam/m.
    const double v = root * (t / m + 1.0);
    const double second = 0.5 * std::exp(2.0 * lam / m - 0.5 * v * v) * erfcx(v / std::numbers::sqrt2);
    return std::min(1.0, first + second);
}

double InverseGaussian::laplace(double s) const {
    if (!(s >= 0.0)) throw DomainError("Laplace argument must be >= 0");
    const double m = params_.m, lam = params_.lambda;
    const double ratio = lam / m;
    // 1 - sqrt(1 + h) = -h / (1 + sqrt(1 + h))
    const double h = 2.0 * m * m * s / lam;
    return std::exp(-ratio * h / (1.0 + std::sqrt(1.0 + h)));
}

double InverseGaussian::sample_from(double normal, double uniform) const {
    const double m = params_.m, lam = params_.lambda;
    const double y = normal * normal;
    const double my = m * y;
    const double x = m + m * my / (2.0 * lam) - m / (2.0 * lam) * std::sqrt(4.0 * lam * my + my * my);
    return uniform <= m / (m + x) ? x : m * m / x;
}

}  // namespace arps
