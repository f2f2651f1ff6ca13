#pragma once

#include "arps/params.hpp"

namespace arps {

struct SeriesTolerance {
    double rel_tol = 1e-12;
    int max_terms = 10000;

    void validate() const;
};

/// Kummer's confluent hypergeometric function M(a, c, z) = 1F1(a; c; z).
/// Negative arguments go through Kummer's transformation so the summed
/// series has positive terms whenever a and c do.
double kummer_m(double a, double c, double z, const SeriesTolerance& tol = {});

/// n!! as a double; exact product up to n = 250, log-domain beyond
/// (returns +inf once the value leaves the double range).
double double_factorial(unsigned n);
double log_double_factorial(unsigned n);

/// phi^(1)(0, z) of the Ornstein-Uhlenbeck mean first-passage series:
///   (1/d0) [ w sqrt(pi) M(1/2, 3/2, w^2) + sum_m 2^m w^(2m+2) / ((m+1) (m+2)!!) ],
/// with w = z sqrt(d0) / sigma. The log variant accumulates in the log domain
/// and stays finite where the value itself overflows.
double sato_phi1(double d0, double sigma, double z, const SeriesTolerance& tol = {});
double sato_phi1_log(double d0, double sigma, double z, const SeriesTolerance& tol = {});

double normal_cdf(double z);

/// exp(z^2) erfc(z) without overflow for large z.
double erfcx(double z);

/// Hermite function of negative order nu < 0 (and H_0 = 1) via
///   H_nu(y) = 1/Gamma(-nu) int_0^inf exp(-s^2 - 2 s y) s^(-nu-1) ds.
/// For 0 < -nu < 1 the pole at s = 0 is subtracted analytically.
double hermite_function(double nu, double y);

/// H_nu(y1) / H_nu(y2); the Gamma factor cancels and is never formed.
double hermite_ratio(double nu, double y1, double y2);

/// Laplace transform E[exp(-u T)] of the first time the exponential-decline
/// constant-volatility model (an Ornstein-Uhlenbeck process) reaches x < q0:
///   H_{-u/d0}(q0 sqrt(d0)/sigma) / H_{-u/d0}(x sqrt(d0)/sigma).
double ou_fpt_laplace(const ArpsParams& p, double x, double u);

/// -d/du of ou_fpt_laplace at u = 0, taken analytically from the regularised
/// Hermite integral; the mean first-passage time of the same process.
double ou_fpt_mean(const ArpsParams& p, double x);

}  // namespace arps
