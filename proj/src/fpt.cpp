#include "arps/fpt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "arps/decline.hpp"
#include "arps/parallel.hpp"
#include "arps/rng.hpp"
#include "arps/specfun.hpp"
#include "arps/stats.hpp"
#include "detail/step_table.hpp"

namespace arps {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
// Bridge probabilities below e^-40 are treated as zero and draw nothing.
constexpr double kBridgeFloor = -40.0;

constexpr double kQuantileLevels[] = {0.05, 0.10, 0.25, 0.50, 0.75, 0.90, 0.95};

FptEstimate make_estimate(const ArpsParams& p, ModelKind model, const FptConfig& config, std::string method) {
    FptEstimate est{.params = p, .model = model, .config = config, .method = std::move(method)};
    est.samples.assign(config.n_paths, 0.0);
    est.censored.assign(config.n_paths, 0);
    return est;
}

bool bridge_hit(double exponent, const CounterStream& uniforms, std::size_t step) {
    if (!(exponent > kBridgeFloor)) return false;
    return uniforms.uniform_at(step) < std::exp(exponent);
}

}  // namespace

void FptConfig::validate() const {
    if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("level x must be finite and > 0");
    if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("dt must be > 0");
    if (!(horizon > 0.0) || !std::isfinite(horizon)) throw DomainError("horizon must be > 0");
    if (n_paths < 1) throw DomainError("n_paths must be >= 1");
}

double FptEstimate::survival(double t) const {
    if (t > config.horizon) throw DomainError("survival is only identified up to the censoring horizon");
    std::size_t alive = 0;
    for (std::size_t k = 0; k < samples.size(); ++k)
        if (censored[k] || samples[k] > t) ++alive;
    return static_cast<double>(alive) / static_cast<double>(samples.size());
}

std::vector<double> FptEstimate::hits() const {
    std::vector<double> out;
    out.reserve(samples.size() - n_censored);
    for (std::size_t k = 0; k < samples.size(); ++k)
        if (!censored[k]) out.push_back(samples[k]);
    return out;
}

void finalize_estimate(FptEstimate& est) {
    const std::size_t n = est.samples.size();
    est.n_censored = static_cast<std::size_t>(std::count(est.censored.begin(), est.censored.end(), 1));
    est.censored_fraction = static_cast<double>(est.n_censored) / static_cast<double>(n);
    const auto hit = est.hits();
    if (hit.empty()) {
        est.mean = est.variance = est.mean_std_error = kNaN;
    } else {
        est.mean = sample_mean(hit);
        est.variance = sample_variance(hit);
        est.mean_std_error = std::sqrt(est.variance / static_cast<double>(hit.size()));
    }

    // Censored entries sort last, as +infinity.
    std::vector<double> order = hit;
    std::sort(order.begin(), order.end());
    const std::size_t n_hit = order.size();
    const auto at = [&](std::size_t i) { return i < n_hit ? order[i] : kNaN; };
    const double nn = static_cast<double>(n);
    const auto index = [&](double p) {
        const double raw = std::ceil(std::clamp(p, 0.0, 1.0) * nn) - 1.0;
        return static_cast<std::size_t>(std::clamp(raw, 0.0, nn - 1.0));
    };
    est.quantiles.clear();
    for (double p : kQuantileLevels) {
        QuantileEstimate q{p, 0.0, kNaN, false};
        const std::size_t i = index(p);
        if (i >= n_hit) {
            q.value = est.config.horizon;
            q.lower_bound = true;
        } else {
            q.value = order[i];
            const double half = std::sqrt(p * (1.0 - p) / nn);
            const std::size_t lo = index(p - half), hi = index(p + half);
            if (hi < n_hit) q.std_error = 0.5 * (at(hi) - at(lo));
        }
        est.quantiles.push_back(q);
    }
}

FptEstimate fpt_mc(const ArpsParams& p, ModelKind model, const FptConfig& config) {
    config.validate();
    FptEstimate est = make_estimate(p, model, config, std::string("direct-") + std::string(to_string(config.scheme)));
    if (config.x >= p.q0()) {
        finalize_estimate(est);
        return est;
    }

    const detail::StepTable table(p, model, config.scheme, TimeGrid::uniform(config.dt, config.horizon));
    const auto& grid = table.grid();
    const std::size_t steps = grid.size() - 1;
    const double x = config.x;
    const double sigma2 = p.sigma2();
    const bool linear = model == ModelKind::LinearVol;

    parallel_for(config.n_paths, resolve_workers(config.workers), [&](std::size_t begin, std::size_t end) {
        for (std::size_t k = begin; k < end; ++k) {
            const NoiseSpec spec{config.seed, k};
            const CounterStream normals(spec, NoiseLane::Gaussian);
            const CounterStream uniforms(spec, NoiseLane::Bridge);
            auto state = table.initial();
            std::array<double, 2> pair{};
            double hit = config.horizon;
            bool censored = true;
            for (std::size_t i = 0; i < steps; ++i) {
                if (i % 2 == 0) pair = normals.normal_pair(i / 2);
                const double prev = state.value;
                const double next = table.advance(i, pair[i % 2], state);
                bool crossed = next <= x;
                if (!crossed && config.bridge) {
                    const double alpha2 = linear ? sigma2 * prev * prev : sigma2;
                    const double var = alpha2 * (grid[i + 1] - grid[i]);
                    if (var > 0.0) crossed = bridge_hit(-2.0 * (prev - x) * (next - x) / var, uniforms, i);
                }
                if (crossed) {
                    hit = grid[i + 1];
                    censored = false;
                    break;
                }
            }
            est.samples[k] = hit;
            est.censored[k] = censored ? 1 : 0;
        }
    });
    finalize_estimate(est);
    return est;
}

FptEstimate fpt_time_change_model1(const ArpsParams& p, const FptConfig& config) {
    config.validate();
    FptEstimate est = make_estimate(p, ModelKind::ConstantVol, config, "time-change");
    if (config.x >= p.q0()) {
        finalize_estimate(est);
        return est;
    }
    if (!(p.sigma() > 0.0)) throw DomainError("time-change estimator requires sigma > 0");
    const double clock_end = time_change_tau(p, config.horizon);
    if (!std::isfinite(clock_end)) throw DomainError("horizon overflows the tau clock");
    const double dr = config.dt;
    const double x = config.x;

    parallel_for(config.n_paths, resolve_workers(config.workers), [&](std::size_t begin, std::size_t end) {
        for (std::size_t k = begin; k < end; ++k) {
            const NoiseSpec spec{config.seed, k};
            const CounterStream normals(spec, NoiseLane::Gaussian);
            const CounterStream uniforms(spec, NoiseLane::Bridge);
            std::array<double, 2> pair{};
            double w = 0.0, r = 0.0;
            double gap = -boundary_c1(p, x, 0.0);  // W - c1 > 0 until the crossing
            double hit = config.horizon;
            bool censored = true;
            for (std::size_t j = 0; r < clock_end; ++j) {
                const double r_next = std::min(static_cast<double>(j + 1) * dr, clock_end);
                const double step = r_next - r;
                if (j % 2 == 0) pair = normals.normal_pair(j / 2);
                w += std::sqrt(step) * pair[j % 2];
                const double gap_next = w - boundary_c1(p, x, r_next);
                bool crossed = gap_next <= 0.0;
                if (!crossed && config.bridge) crossed = bridge_hit(-2.0 * gap * gap_next / step, uniforms, j);
                r = r_next;
                gap = gap_next;
                if (crossed) {
                    hit = std::min(time_change_tau_inv(p, r), config.horizon);
                    censored = false;
                    break;
                }
            }
            est.samples[k] = hit;
            est.censored[k] = censored ? 1 : 0;
        }
    });
    finalize_estimate(est);
    return est;
}

InverseGaussianParams fpt_ig_model2_b0(const ArpsParams& p, double x) {
    if (!p.exponential()) throw DomainError("inverse Gaussian first-passage law needs b = 0");
    if (!(p.sigma() > 0.0)) throw DomainError("inverse Gaussian first-passage law needs sigma > 0");
    if (!(x > 0.0 && x < p.q0())) throw DomainError("level x must satisfy 0 < x < q0");
    const double log_ratio = std::log(p.q0() / x);
    const double scaled = log_ratio / p.sigma();
    return {2.0 * log_ratio / (2.0 * p.d0() + p.sigma2()), scaled * scaled};
}

std::string_view to_string(DurbinForm form) { return form == DurbinForm::Corrected ? "corrected" : "as_printed"; }

DurbinForm parse_durbin_form(std::string_view name) {
    if (name == "corrected") return DurbinForm::Corrected;
    if (name == "as_printed" || name == "as-printed") return DurbinForm::AsPrinted;
    throw DomainError("unknown Durbin form '" + std::string(name) + "' (expected corrected or as_printed)");
}

double durbin_density_at(const ArpsParams& p, double x, double t, DurbinForm form) {
    const auto c2 = boundary_c2(p, x, 0.0);  // validates x and sigma
    (void)c2;
    if (!(t > 0.0)) return 0.0;
    const double sigma = p.sigma(), d0 = p.d0();
    const double curvature = d0 / (sigma * (1.0 + p.b() * d0 * t));
    const double prefactor = (std::log(p.q0() / x) + log_decay(p, t)) / (sigma * t) +
                             (form == DurbinForm::Corrected ? curvature : -curvature);
    const double level = boundary_c2(p, x, t).level;
    return prefactor * std::exp(-level * level / (2.0 * t)) / std::sqrt(2.0 * std::numbers::pi * t);
}

DensityCurve durbin_density(const ArpsParams& p, double x, const TimeGrid& grid, DurbinForm form) {
    DensityCurve curve{grid, std::vector<double>(grid.size()), form};
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double v = durbin_density_at(p, x, grid[i], form);
        if (v < 0.0) {
            v = 0.0;
            ++curve.clamp_count;
        }
        curve.values[i] = v;
    }
    double mass = 0.0;
    for (std::size_t i = 0; i + 1 < grid.size(); ++i)
        mass += 0.5 * (curve.values[i] + curve.values[i + 1]) * (grid[i + 1] - grid[i]);
    curve.normalization_defect = std::abs(1.0 - mass);
    return curve;
}

MeanFptBounds mean_fpt_bounds(const ArpsParams& p, double x, ModelKind model) {
    if (!(x > 0.0 && x < p.q0())) throw DomainError("level x must satisfy 0 < x < q0");
    MeanFptBounds out;
    out.model = model;
    if (model == ModelKind::LinearVol) {
        out.lower_bound = 2.0 * std::log(p.q0() / x) / (2.0 * p.d0() + p.sigma2());
        out.note = "inverse Gaussian mean at b = 0; a lower bound for every b by stochastic ordering in b";
        return out;
    }
    if (!(p.sigma() > 0.0)) throw DomainError("phi^(1) series needs sigma > 0");
    try {
        const double lx = sato_phi1_log(p.d0(), p.sigma(), x);
        const double lq = sato_phi1_log(p.d0(), p.sigma(), p.q0());
        out.log_phi_x = lx;
        out.log_phi_q0 = lq;
        // phi is increasing, so phi(x) - phi(q0) < 0 for x < q0: e^lq (e^(lx - lq) - 1).
        const double diff = std::isinf(lq) ? -lq : std::exp(lq) * std::expm1(lx - lq);
        out.as_printed = diff;
        out.magnitude = std::abs(diff);
        out.note =
            "phi(0,x) - phi(0,q0) is negative for x < q0 and bounds nothing; its magnitude is "
            "reported alongside for comparison with Monte Carlo, neither is asserted as a bound";
    } catch (const NumericalError& e) {
        out.note = std::string("phi^(1) series not evaluated: ") + e.what();
    }
    return out;
}

OrderReport stochastic_order_check(std::span<const double> a, std::span<const double> b, double alpha,
                                   const OrderCheckOptions& options) {
    if (a.empty() || b.empty()) throw DomainError("ordering check needs nonempty samples");
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
    const std::size_t na = a.size(), nb = b.size(), n = na + nb;

    std::vector<double> pooled;
    pooled.reserve(n);
    pooled.insert(pooled.end(), a.begin(), a.end());
    pooled.insert(pooled.end(), b.begin(), b.end());
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return pooled[i] < pooled[j]; });
    std::vector<double> sorted(n);
    std::vector<std::uint8_t> label(n);  // 1 = belongs to a
    for (std::size_t i = 0; i < n; ++i) {
        sorted[i] = pooled[order[i]];
        label[i] = order[i] < na ? 1 : 0;
    }

    // sup_t (S_a - S_b) = sup_t (F_b - F_a), evaluated after each tie group.
    const auto violation = [&](const std::vector<std::uint8_t>& lab) {
        std::size_t ca = 0, cb = 0;
        double d = 0.0;
        for (std::size_t i = 0; i < n;) {
            std::size_t j = i;
            while (j < n && sorted[j] == sorted[i]) {
                (lab[j] ? ca : cb) += 1;
                ++j;
            }
            d = std::max(d, static_cast<double>(cb) / nb - static_cast<double>(ca) / na);
            i = j;
        }
        return d;
    };

    OrderReport rep{};
    rep.alpha = alpha;
    rep.permutations = options.permutations;
    rep.max_violation = violation(label);

    std::vector<double> null_stats;
    null_stats.reserve(options.permutations);
    std::vector<std::uint8_t> shuffled(label);
    std::size_t exceed = 0;
    for (std::size_t perm = 0; perm < options.permutations; ++perm) {
        const CounterStream uniforms(NoiseSpec{options.seed, perm}, NoiseLane::Auxiliary);
        for (std::size_t i = n - 1; i > 0; --i) {
            const auto j = static_cast<std::size_t>(uniforms.uniform_at(i) * static_cast<double>(i + 1));
            std::swap(shuffled[i], shuffled[std::min(j, i)]);
        }
        const double d = violation(shuffled);
        null_stats.push_back(d);
        if (d >= rep.max_violation - 1e-12) ++exceed;
    }
    if (null_stats.empty()) {
        rep.critical_value = kNaN;
        rep.p_value = 1.0;
    } else {
        std::sort(null_stats.begin(), null_stats.end());
        const double pos = std::ceil((1.0 - alpha) * static_cast<double>(null_stats.size() + 1)) - 1.0;
        rep.critical_value = null_stats[static_cast<std::size_t>(std::clamp(pos, 0.0, null_stats.size() - 1.0))];
        rep.p_value = static_cast<double>(exceed + 1) / static_cast<double>(null_stats.size() + 1);
    }
    rep.dominance_accepted = rep.p_value > alpha;

    rep.mean_a = sample_mean(a);
    rep.mean_b = sample_mean(b);
    rep.se_a = std::sqrt(sample_variance(a) / static_cast<double>(na));
    rep.se_b = std::sqrt(sample_variance(b) / static_cast<double>(nb));
    rep.means_ordered = rep.mean_a <= rep.mean_b + 3.0 * std::hypot(rep.se_a, rep.se_b);
    return rep;
}

}  // namespace arps
