#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "arps/inverse_gaussian.hpp"
#include "arps/params.hpp"
#include "arps/sim.hpp"

namespace arps {

struct FptConfig {
    double x = 0.0;        // level to reach from above
    double horizon = 0.0;  // censoring time
    double dt = 0.0;       // step (tau-clock step for the time-change estimator)
    std::size_t n_paths = 0;
    std::uint64_t seed = 0;
    bool bridge = true;
    Scheme scheme = Scheme::Exact;
    unsigned workers = 0;

    void validate() const;
};

struct QuantileEstimate {
    double p;
    double value;
    double std_error;  // NaN when the bracketing order statistics are censored
    bool lower_bound;  // quantile lies in the censored tail; value is the horizon
};

/// Monte Carlo first-passage sample. Censored paths carry the horizon as
/// their time and are excluded from mean and variance.
struct FptEstimate {
    ArpsParams params;
    ModelKind model;
    FptConfig config;
    std::string method;

    std::vector<double> samples{};
    std::vector<std::uint8_t> censored{};
    std::size_t n_censored = 0;
    double censored_fraction = 0.0;
    double mean = 0.0;
    double variance = 0.0;
    double mean_std_error = 0.0;
    std::vector<QuantileEstimate> quantiles{};

    /// Empirical P[T > t] for t <= horizon; censored paths count as surviving.
    double survival(double t) const;
    /// Uncensored hitting times.
    std::vector<double> hits() const;
};

/// Fills the summary fields of an estimate from its samples and flags.
void finalize_estimate(FptEstimate& est);

/// Direct Monte Carlo of T_{Q,x} = inf{t : Q_t <= x}. Exact scheme steps the
/// closed-form solutions on the grid; with `bridge` an intra-step crossing is
/// also registered with probability exp(-2 (Q_i - x)(Q_{i+1} - x) / (alpha(Q_i)^2 dt)).
FptEstimate fpt_mc(const ArpsParams& p, ModelKind model, const FptConfig& config);

/// Constant-volatility first passage through the time-changed representation:
/// a standard Brownian motion W on a uniform tau-clock grid of step config.dt,
/// first crossing of boundary_c1 (linear-boundary bridge correction), mapped
/// back through time_change_tau_inv. Censoring at tau(horizon).
FptEstimate fpt_time_change_model1(const ArpsParams& p, const FptConfig& config);

/// Exact first-passage law of the linear-volatility model when b = 0.
InverseGaussianParams fpt_ig_model2_b0(const ArpsParams& p, double x);

enum class DurbinForm { Corrected, AsPrinted };

std::string_view to_string(DurbinForm form);
DurbinForm parse_durbin_form(std::string_view name);

/// Tangent approximation p(t) f(t) of the linear-volatility first-passage
/// density, with f(t) = exp(-c2(t)^2 / 2t) / sqrt(2 pi t). Corrected uses
/// p = c2' - c2/t; AsPrinted flips the sign of the d0 term.
double durbin_density_at(const ArpsParams& p, double x, double t, DurbinForm form);

struct DensityCurve {
    TimeGrid grid;
    std::vector<double> values;
    DurbinForm form;
    std::size_t clamp_count = 0;
    double normalization_defect = 0.0;  // |1 - trapezoid integral over the grid|
};

DensityCurve durbin_density(const ArpsParams& p, double x, const TimeGrid& grid,
                            DurbinForm form = DurbinForm::Corrected);

struct MeanFptBounds {
    ModelKind model;
    /// Linear volatility: 2 ln(q0/x) / (2 d0 + sigma^2).
    std::optional<double> lower_bound;
    /// Constant volatility: the phi^(1) series at x and q0 (natural logs kept
    /// because the value at q0 often overflows), the signed difference
    /// phi(x) - phi(q0), and its magnitude.
    std::optional<double> log_phi_x;
    std::optional<double> log_phi_q0;
    std::optional<double> as_printed;
    std::optional<double> magnitude;
    std::string note;
};

MeanFptBounds mean_fpt_bounds(const ArpsParams& p, double x, ModelKind model);

struct OrderCheckOptions {
    std::size_t permutations = 999;
    std::uint64_t seed = 0;
};

struct OrderReport {
    /// sup_t (S_a(t) - S_b(t)); zero when a is empirically dominated by b.
    double max_violation;
    /// (1 - alpha) permutation quantile of the violation under exchangeability.
    double critical_value;
    double p_value;
    double alpha;
    bool dominance_accepted;
    double mean_a, mean_b;
    double se_a, se_b;
    /// mean_a <= mean_b within three pooled standard errors.
    bool means_ordered;
    std::size_t permutations;
};

/// Empirical check of a <=_st b (P[a > t] <= P[b > t] for all t).
OrderReport stochastic_order_check(std::span<const double> a, std::span<const double> b, double alpha,
                                   const OrderCheckOptions& options = {});

}  // namespace arps
