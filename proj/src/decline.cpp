#include "arps/decline.hpp"

#include <algorithm>
#include <cmath>

namespace arps {
namespace {

void require_time(double t, const char* what) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError(std::string(what) + " must be finite and >= 0");
}

void require_level(const ArpsParams& p, double x) {
    if (!(x > 0.0 && x < p.q0())) throw DomainError("level x must satisfy 0 < x < q0");
    if (!(p.sigma() > 0.0)) throw DomainError("boundary requires sigma > 0");
}

// ln(1 + b d0 t); the only place the hyperbolic base is formed.
double log_base(const ArpsParams& p, double t) { return std::log1p(p.b() * p.d0() * t); }

}  // namespace

double log_decay(const ArpsParams& p, double t) {
    require_time(t, "t");
    if (p.exponential()) return -p.d0() * t;
    return -log_base(p, t) / p.b();
}

double decay_factor(const ArpsParams& p, double t) { return std::exp(log_decay(p, t)); }

double arps_rate(const ArpsParams& p, double t) { return p.q0() * decay_factor(p, t); }

double arps_cumulative(const ArpsParams& p, double t) {
    require_time(t, "t");
    const double q0 = p.q0(), d0 = p.d0(), b = p.b();
    if (p.exponential()) return -q0 * std::expm1(-d0 * t) / d0;
    if (p.harmonic()) return q0 * std::log1p(d0 * t) / d0;
    return q0 * std::expm1((1.0 - 1.0 / b) * log_base(p, t)) / (d0 * (b - 1.0));
}

double time_change_tau(const ArpsParams& p, double t) {
    require_time(t, "t");
    const double d0 = p.d0(), b = p.b();
    if (p.exponential()) return std::expm1(2.0 * d0 * t) / (2.0 * d0);
    return std::expm1((b + 2.0) / b * log_base(p, t)) / (d0 * (b + 2.0));
}

double time_change_tau_increment(const ArpsParams& p, double s, double t) {
    require_time(s, "s");
    require_time(t, "t");
    if (t < s) throw DomainError("tau increment requires s <= t");
    const double d0 = p.d0(), b = p.b();
    if (p.exponential()) return std::exp(2.0 * d0 * s) * std::expm1(2.0 * d0 * (t - s)) / (2.0 * d0);
    const double k = (b + 2.0) / b;
    const double rel = std::log1p(b * d0 * (t - s) / (1.0 + b * d0 * s));
    return std::exp(k * log_base(p, s)) * std::expm1(k * rel) / (d0 * (b + 2.0));
}

double time_change_tau_inv(const ArpsParams& p, double r) {
    require_time(r, "r");
    const double d0 = p.d0(), b = p.b();
    if (p.exponential()) return std::log1p(2.0 * d0 * r) / (2.0 * d0);
    return std::expm1(b / (b + 2.0) * std::log1p(r * (b + 2.0) * d0)) / (b * d0);
}

MomentSummary model1_moments(const ArpsParams& p, double s, double t) {
    require_time(s, "s");
    require_time(t, "t");
    const double d0 = p.d0(), b = p.b(), s2 = p.sigma2();
    MomentSummary m;
    m.mean = arps_rate(p, t);
    if (p.exponential()) {
        m.variance = -s2 * std::expm1(-2.0 * d0 * t) / (2.0 * d0);
    } else {
        const double lb = log_base(p, t);
        m.variance = -s2 * std::exp(lb) / (d0 * (2.0 + b)) * std::expm1(-(2.0 / b + 1.0) * lb);
    }
    // sigma^2 q(s)/q0 q(t)/q0 int_0^min (1 + b d0 u)^(2/b) du, the integral being tau(min).
    const double lo = std::min(s, t);
    m.covariance = s2 * decay_factor(p, s) * decay_factor(p, t) * time_change_tau(p, lo);
    return m;
}

MomentSummary model2_moments(const ArpsParams& p, double t) {
    require_time(t, "t");
    const double s2t = p.sigma2() * t;
    MomentSummary m;
    m.mean = arps_rate(p, t);
    m.variance = m.mean * m.mean * std::expm1(s2t);
    m.lognormal_location = std::log(p.q0()) + log_decay(p, t) - 0.5 * s2t;
    m.lognormal_scale2 = s2t;
    return m;
}

double boundary_c1(const ArpsParams& p, double x, double r) {
    require_level(p, x);
    require_time(r, "r");
    const double growth = std::exp(std::log1p(p.d0() * (p.b() + 2.0) * r) / (p.b() + 2.0));
    return (x * growth - p.q0()) / p.sigma();
}

BoundaryPoint boundary_c2(const ArpsParams& p, double x, double t) {
    require_level(p, x);
    require_time(t, "t");
    const double sigma = p.sigma(), d0 = p.d0(), b = p.b();
    const double level = 0.5 * sigma * t + std::log(x / p.q0()) / sigma - log_decay(p, t) / sigma;
    const double slope = 0.5 * sigma + d0 / (sigma * (1.0 + b * d0 * t));
    return {level, slope};
}

double boundary_c2_linear_bound(const ArpsParams& p, double x, double t) {
    require_level(p, x);
    require_time(t, "t");
    const double sigma = p.sigma();
    return std::log(x / p.q0()) / sigma + (0.5 * sigma + p.d0() / sigma) * t;
}

}  // namespace arps
