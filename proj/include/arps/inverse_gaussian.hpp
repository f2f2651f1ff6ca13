#pragma once

#include <cmath>

#include "arps/params.hpp"

namespace arps {

struct InverseGaussianParams {
    double m;       // mean
    double lambda;  // shape
};

/// Inverse Gaussian law IG(m, lambda): the first-passage time of a Brownian
/// motion through a linear boundary a t + beta is IG(|beta|/a, beta^2).
class InverseGaussian {
public:
    explicit InverseGaussian(InverseGaussianParams params);

    /// Law of the first time B_t <= intercept + slope t, for intercept < 0 < slope.
    static InverseGaussian from_linear_boundary(double intercept, double slope);

    const InverseGaussianParams& params() const noexcept { return params_; }

    double pdf(double t) const;
    double cdf(double t) const;
    double mean() const noexcept { return params_.m; }
    double variance() const noexcept { return params_.m * params_.m * params_.m / params_.lambda; }

    /// E[exp(-s T)] = exp((lambda/m) (1 - sqrt(1 + 2 m^2 s / lambda))).
    double laplace(double s) const;

    /// Michael-Schucany-Haas transformation of one standard normal and one
    /// uniform(0,1) draw.
    double sample_from(double normal, double uniform) const;

    /// Draws through any source exposing normal() and uniform().
    template <class Noise>
    double sample(Noise& noise) const {
        const double z = noise.normal();
        return sample_from(z, noise.uniform());
    }

private:
    InverseGaussianParams params_;
};

}  // namespace arps
