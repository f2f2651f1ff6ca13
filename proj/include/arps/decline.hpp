#pragma once

#include <optional>

#include "arps/params.hpp"

namespace arps {

/// Deterministic Arps rate q(t) = q0 (1 + b d0 t)^(-1/b), exponential when b -> 0.
double arps_rate(const ArpsParams& p, double t);

/// q(t) / q0, evaluated in the log domain.
double decay_factor(const ArpsParams& p, double t);

/// ln(q(t) / q0) = -ln(1 + b d0 t) / b.
double log_decay(const ArpsParams& p, double t);

/// Cumulative production of the deterministic curve over [0, t].
double arps_cumulative(const ArpsParams& p, double t);

struct MomentSummary {
    double mean = 0.0;
    double variance = 0.0;
    std::optional<double> covariance;
    std::optional<double> lognormal_location;
    std::optional<double> lognormal_scale2;
};

/// Gaussian moments of the constant-volatility model. Mean and variance are
/// at `t`; the covariance is Cov[Q_s, Q_t] (symmetric, so s > t is allowed).
MomentSummary model1_moments(const ArpsParams& p, double s, double t);

/// Lognormal moments of the linear-volatility model at `t`.
MomentSummary model2_moments(const ArpsParams& p, double t);

/// Clock tau(t) = Var[int_0^t (1 + b d0 u)^(1/b) dB_u] of the time-changed
/// Brownian representation of the constant-volatility model.
double time_change_tau(const ArpsParams& p, double t);

/// tau(t) - tau(s) for s <= t without cancellation: the variance of the
/// Wiener-integral increment over [s, t].
double time_change_tau_increment(const ArpsParams& p, double s, double t);

/// Inverse of time_change_tau: [(1 + r (b+2) d0)^(b/(b+2)) - 1] / (b d0).
double time_change_tau_inv(const ArpsParams& p, double r);

/// Moving boundary for the standard Brownian motion in the tau-clock:
/// T_{Q,x} has the law of tau^{-1}(first time W_r <= c1(r)).
double boundary_c1(const ArpsParams& p, double x, double r);

struct BoundaryPoint {
    double level;
    double slope;
};

/// Boundary of the linear-volatility model in the Brownian clock:
/// T_{Q,x} = first time B_t <= c2(t).
BoundaryPoint boundary_c2(const ArpsParams& p, double x, double t);

/// Linear majorant of c2: ln(x/q0)/sigma + (sigma/2 + d0/sigma) t.
double boundary_c2_linear_bound(const ArpsParams& p, double x, double t);

}  // namespace arps
