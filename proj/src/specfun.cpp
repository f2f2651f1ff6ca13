#include "arps/specfun.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

namespace arps {
namespace {

constexpr double kQuadTol = 1e-13;

double log_add(double a, double b) {
    if (a == -std::numeric_limits<double>::infinity()) return b;
    if (b == -std::numeric_limits<double>::infinity()) return a;
    const double hi = std::max(a, b), lo = std::min(a, b);
    return hi + std::log1p(std::exp(lo - hi));
}

void check_quadrature(double value, double error, double l1, const char* what) {
    if (!std::isfinite(value) || error > 1e-9 * std::max(l1, std::abs(value)))
        throw NumericalError(std::string("quadrature failed in ") + what);
}

// J(eps, y) = int_0^1 (e^{-s^2-2sy} - 1) s^{eps-1} ds + int_1^inf e^{-s^2-2sy} s^{eps-1} ds,
// so that int_0^inf e^{-s^2-2sy} s^{eps-1} ds = 1/eps + J for 0 < eps.
double hermite_regular_part(double eps, double y) {
    thread_local boost::math::quadrature::tanh_sinh<double> near;
    thread_local boost::math::quadrature::exp_sinh<double> far;
    double err = 0.0, l1 = 0.0;
    const double inner = near.integrate(
        [eps, y](double s) {
            if (s <= 0.0) return eps == 0.0 ? -2.0 * y : 0.0;
            return std::expm1(-s * s - 2.0 * s * y) * std::pow(s, eps - 1.0);
        },
        0.0, 1.0, kQuadTol, &err, &l1);
    check_quadrature(inner, err, l1, "hermite_function (near)");
    const double outer = far.integrate(
        [eps, y](double s) { return std::exp(-s * s - 2.0 * s * y + (eps - 1.0) * std::log(s)); },
        1.0, std::numeric_limits<double>::infinity(), kQuadTol, &err, &l1);
    check_quadrature(outer, err, l1, "hermite_function (far)");
    return inner + outer;
}

// log int_0^inf e^{-s^2-2sy} s^{eps-1} ds for eps >= 1, scaled at the mode.
double hermite_log_integral(double eps, double y) {
    thread_local boost::math::quadrature::exp_sinh<double> far;
    const double a = eps - 1.0;
    const double mode = 0.5 * (-y + std::sqrt(y * y + 2.0 * a));
    const double shift = (a > 0.0 ? a * std::log(mode) : 0.0) - mode * mode - 2.0 * mode * y;
    double err = 0.0, l1 = 0.0;
    const double scaled = far.integrate(
        [a, y, shift](double s) {
            if (s <= 0.0) return a == 0.0 ? std::exp(-shift) : 0.0;
            return std::exp(a * std::log(s) - s * s - 2.0 * s * y - shift);
        },
        kQuadTol, &err, &l1);
    check_quadrature(scaled, err, l1, "hermite_function");
    return shift + std::log(scaled);
}

void require_hermite_args(double nu, double y) {
    if (!(nu <= 0.0) || !std::isfinite(nu)) throw DomainError("hermite_function requires order nu <= 0");
    if (!(y >= 0.0) || !std::isfinite(y)) throw DomainError("hermite_function requires y >= 0");
}

}  // namespace

void SeriesTolerance::validate() const {
    if (!(rel_tol > 0.0)) throw DomainError("series rel_tol must be > 0");
    if (max_terms < 1) throw DomainError("series max_terms must be >= 1");
}

double kummer_m(double a, double c, double z, const SeriesTolerance& tol) {
    tol.validate();
    if (c <= 0.0 && c == std::floor(c)) throw DomainError("kummer_m: c must not be a nonpositive integer");
    if (z < 0.0) return std::exp(z) * kummer_m(c - a, c, -z, tol);

    double term = 1.0;
    double sum = 1.0;
    for (int k = 0; k < tol.max_terms; ++k) {
        const double next = term * (a + k) / (c + k) * z / (k + 1);
        sum += next;
        if (next == 0.0) return sum;
        if (!std::isfinite(sum)) throw NumericalError("kummer_m: series overflow");
        const bool shrinking = std::abs(next) < std::abs(term);
        term = next;
        if (shrinking && std::abs(term) <= tol.rel_tol * std::abs(sum)) return sum;
    }
    throw NumericalError("kummer_m: no convergence within " + std::to_string(tol.max_terms) + " terms");
}

double log_double_factorial(unsigned n) {
    double acc = 0.0;
    for (unsigned k = n; k > 1; k -= 2) acc += std::log(static_cast<double>(k));
    return acc;
}

double double_factorial(unsigned n) {
    if (n > 250) return std::exp(log_double_factorial(n));
    double acc = 1.0;
    for (unsigned k = n; k > 1; k -= 2) acc *= k;
    return acc;
}

namespace {
// ln M(1/2, 3/2, z) for z >= 0. Terms z^k / ((2k+1) k!) are all positive,
// so large z is summed in logs.
double log_kummer_half(double z, const SeriesTolerance& tol) {
    if (z < 600.0) return std::log(kummer_m(0.5, 1.5, z, tol));
    const double log_z = std::log(z), log_tol = std::log(tol.rel_tol);
    double log_sum = 0.0, log_fact = 0.0;
    for (int k = 1; k < tol.max_terms; ++k) {
        log_fact += std::log(static_cast<double>(k));
        const double log_term = k * log_z - log_fact - std::log(2.0 * k + 1.0);
        log_sum = log_add(log_sum, log_term);
        if (k > z && log_term - log_sum < log_tol) return log_sum;
    }
    throw NumericalError("kummer_m: no convergence within " + std::to_string(tol.max_terms) + " terms");
}
}  // namespace

double sato_phi1_log(double d0, double sigma, double z, const SeriesTolerance& tol) {
    tol.validate();
    if (!(d0 > 0.0)) throw DomainError("sato_phi1: d0 must be > 0");
    if (!(sigma > 0.0)) throw DomainError("sato_phi1: sigma must be > 0");
    if (!(z >= 0.0)) throw DomainError("sato_phi1: z must be >= 0");
    if (z == 0.0) return -std::numeric_limits<double>::infinity();

    const double w = z * std::sqrt(d0) / sigma;
    const double log_w = std::log(w);
    double log_sum = log_w + 0.5 * std::log(std::numbers::pi) + log_kummer_half(w * w, tol);

    // Running (m+2)!!, kept as a product while small and in logs afterwards.
    double log_df_even = std::log(2.0);  // 2!!
    double log_df_odd = std::log(3.0);   // 3!!
    double prev = std::numeric_limits<double>::infinity();
    const double log_tol = std::log(tol.rel_tol);
    for (int m = 0; m < tol.max_terms; ++m) {
        const unsigned n = static_cast<unsigned>(m) + 2;
        if (m >= 2) {
            if (n % 2 == 0)
                log_df_even += std::log(static_cast<double>(n));
            else
                log_df_odd += std::log(static_cast<double>(n));
        }
        const double log_df = n <= 250 ? std::log(double_factorial(n)) : (n % 2 == 0 ? log_df_even : log_df_odd);
        const double log_term = m * std::numbers::ln2 + (2.0 * m + 2.0) * log_w - std::log(m + 1.0) - log_df;
        log_sum = log_add(log_sum, log_term);
        if (log_term < prev && log_term - log_sum < log_tol) return log_sum - std::log(d0);
        prev = log_term;
    }
    throw NumericalError("sato_phi1: no convergence within " + std::to_string(tol.max_terms) + " terms");
}

double sato_phi1(double d0, double sigma, double z, const SeriesTolerance& tol) {
    const double v = std::exp(sato_phi1_log(d0, sigma, z, tol));
    if (std::isinf(v)) throw NumericalError("sato_phi1: value overflows double; use sato_phi1_log");
    return v;
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double erfcx(double z) {
    if (z < 25.0) return std::exp(z * z) * std::erfc(z);
    // Asymptotic expansion; the fifth term is below 1e-16 relative here.
    const double inv = 1.0 / (2.0 * z * z);
    double sum = 1.0, term = 1.0;
    for (int k = 1; k <= 5; ++k) {
        term *= -(2.0 * k - 1.0) * inv;
        sum += term;
    }
    return sum / (z * std::sqrt(std::numbers::pi));
}

double hermite_function(double nu, double y) {
    require_hermite_args(nu, y);
    if (nu == 0.0) return 1.0;
    const double eps = -nu;
    if (eps < 1.0) return (1.0 + eps * hermite_regular_part(eps, y)) / std::tgamma(1.0 + eps);
    return std::exp(hermite_log_integral(eps, y) - std::lgamma(eps));
}

double hermite_ratio(double nu, double y1, double y2) {
    require_hermite_args(nu, y1);
    require_hermite_args(nu, y2);
    if (nu == 0.0 || y1 == y2) return 1.0;
    const double eps = -nu;
    if (eps < 1.0)
        return (1.0 + eps * hermite_regular_part(eps, y1)) / (1.0 + eps * hermite_regular_part(eps, y2));
    return std::exp(hermite_log_integral(eps, y1) - hermite_log_integral(eps, y2));
}

namespace {
void require_ou_args(const ArpsParams& p, double x) {
    if (!p.exponential()) throw DomainError("OU Laplace transform requires the exponential regime b = 0");
    if (!(p.sigma() > 0.0)) throw DomainError("OU Laplace transform requires sigma > 0");
    if (!(x > 0.0 && x <= p.q0())) throw DomainError("OU Laplace transform requires 0 < x <= q0");
}
}  // namespace

double ou_fpt_laplace(const ArpsParams& p, double x, double u) {
    require_ou_args(p, x);
    if (!(u >= 0.0) || !std::isfinite(u)) throw DomainError("Laplace argument u must be >= 0");
    if (u == 0.0) return 1.0;
    const double scale = std::sqrt(p.d0()) / p.sigma();
    return hermite_ratio(-u / p.d0(), p.q0() * scale, x * scale);
}

double ou_fpt_mean(const ArpsParams& p, double x) {
    require_ou_args(p, x);
    const double scale = std::sqrt(p.d0()) / p.sigma();
    return (hermite_regular_part(0.0, x * scale) - hermite_regular_part(0.0, p.q0() * scale)) / p.d0();
}

}  // namespace arps
