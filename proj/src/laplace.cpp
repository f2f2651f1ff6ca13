#include "arps/laplace.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "arps/params.hpp"

namespace arps {
namespace {

long double factorial(int n) {
    long double acc = 1.0L;
    for (int k = 2; k <= n; ++k) acc *= k;
    return acc;
}

double stehfest_sum(const std::function<double(double)>& transform, double t, int nodes) {
    const auto weights = stehfest_weights(nodes);
    const double a = std::numbers::ln2 / t;
    long double acc = 0.0L;
    for (int k = 1; k <= nodes; ++k) {
        const double f = transform(k * a);
        if (!std::isfinite(f)) throw NumericalError("laplace_invert: transform not finite at s=" + std::to_string(k * a));
        acc += static_cast<long double>(weights[k - 1]) * f;
    }
    return static_cast<double>(acc * a);
}

}  // namespace

std::vector<double> stehfest_weights(int nodes) {
    if (nodes < 2 || nodes % 2 != 0 || nodes > 30) throw DomainError("Stehfest node count must be even and in [2, 30]");
    const int half = nodes / 2;
    std::vector<double> weights(nodes);
    for (int k = 1; k <= nodes; ++k) {
        long double acc = 0.0L;
        for (int j = (k + 1) / 2; j <= std::min(k, half); ++j) {
            acc += std::pow(static_cast<long double>(j), half) * factorial(2 * j) /
                   (factorial(half - j) * factorial(j) * factorial(j - 1) * factorial(k - j) * factorial(2 * j - k));
        }
        weights[k - 1] = static_cast<double>(((k + half) % 2 == 0 ? 1.0L : -1.0L) * acc);
    }
    return weights;
}

LaplaceInversion laplace_invert(const std::function<double(double)>& transform, double t,
                                const StehfestOptions& options) {
    if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("laplace_invert requires t > 0");
    const double value = stehfest_sum(transform, t, options.nodes);
    const double check = stehfest_sum(transform, t, options.check_nodes);
    if (std::abs(value - check) > options.rel_tol * std::abs(value))
        throw NumericalError("laplace_invert: unstable at t=" + std::to_string(t) + " (" + std::to_string(value) +
                             " vs " + std::to_string(check) + " with fewer nodes)");
    return {value, check, options.nodes};
}

}  // namespace arps
