// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "arps/decline.hpp"
#include "arps/fpt.hpp"
#include "arps/inverse_gaussian.hpp"
#include "arps/io.hpp"
#include "arps/laplace.hpp"
#include "arps/sim.hpp"
#include "arps/specfun.hpp"
#include "arps/stats.hpp"
#include "cli.hpp"

namespace {

using namespace arps;
namespace fs = std::filesystem;

struct Check {
    bool ok = true;
    std::ostringstream detail;
    std::set<std::string> failed;

    void require(bool cond, const std::string& what) {
        if (!cond) {
            if (!failed.insert(what).second) return;
            ok = false;
            detail << " [failed: " << what << "]";
        }
    }
};

int failures = 0;

void report(int id, const std::string& title, const std::function<void(Check&)>& body) {
    Check c;
    const auto start = std::chrono::steady_clock::now();
    try {
        body(c);
    } catch (const std::exception& e) {
        c.ok = false;
        c.detail << " [exception: " << e.what() << "]";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!c.ok) ++failures;
    std::printf("%s criterion %d: %s (%.1f s)%s\n", c.ok ? "PASS" : "FAIL", id, title.c_str(), secs,
                c.detail.str().c_str());
    std::fflush(stdout);
}

std::string fmt(double v) { return io::format_double(v); }

FptConfig fpt_config(double x, double horizon, double dt, std::size_t n, std::uint64_t seed) {
    FptConfig c;
    c.x = x;
    c.horizon = horizon;
    c.dt = dt;
    c.n_paths = n;
    c.seed = seed;
    return c;
}

double pooled_se(const FptEstimate& a, const FptEstimate& b) {
    return std::hypot(a.mean_std_error, b.mean_std_error);
}

std::vector<double> column_at(const PathEnsemble& e, std::size_t i) {
    std::vector<double> out;
    out.reserve(e.paths.size());
    for (const auto& p : e.paths) out.push_back(p.values[i]);
    return out;
}

// Direct long-double summation of the mean first-passage series, with the
// Kummer term through M(1/2, 3/2, w^2) = sqrt(pi) erfi(w) / (2 w).
double sato_oracle(double d0, double sigma, double z) {
    const long double w = z * std::sqrt(static_cast<long double>(d0)) / sigma;
    long double erfi = w, term = w;
    for (int k = 1; k < 500; ++k) {
        term *= w * w / k;
        const long double add = term / (2 * k + 1);
        erfi += add;
        if (add < 1e-22L * erfi) break;
    }
    erfi *= 2.0L / std::sqrt(std::numbers::pi_v<long double>);
    long double sum = std::numbers::pi_v<long double> * erfi / 2.0L;
    long double pow2 = 1.0L, wpow = w * w, df_lo = 1.0L, df_hi = 2.0L;
    for (int m = 0; m < 100000; ++m) {
        const long double t = pow2 * wpow / ((m + 1) * df_hi);
        sum += t;
        if (m > 4.0L * w * w * w * w && t < 1e-22L * sum) break;
        pow2 *= 2.0L;
        wpow *= w * w;
        const long double next = (m + 3) * df_lo;
        df_lo = df_hi;
        df_hi = next;
    }
    return static_cast<double>(sum / d0);
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

io::CsvTable load_csv(const fs::path& p) {
    std::ifstream is(p);
    return io::read_csv(is);
}

const ArpsParams kConstVol(380.0, 3e-4, 0.0, 1.0);
const ArpsParams kLinearVol = ArpsParams::from_sigma2(380.0, 3e-4, 0.0, 0.01);
constexpr double kLevel = 100.0;
const std::vector<double> kShapes{0.0, 0.5, 1.0};

}  // namespace

int main() {
    std::printf("arps-sde acceptance suite\n");

    report(1, "inverse Gaussian law vs Monte Carlo, linear volatility, b = 0", [](Check& c) {
        const InverseGaussian ig(fpt_ig_model2_b0(kLinearVol, kLevel));
        const std::size_t n = 100000;
        const auto start = std::chrono::steady_clock::now();
        const auto est = fpt_mc(kLinearVol, ModelKind::LinearVol, fpt_config(kLevel, 1e4, 0.05, n, 20240101));
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const double rel = std::abs(est.mean - 251.887) / 251.887;
        const double ks = ks_statistic(est.samples, [&](double t) { return ig.cdf(t); });
        const double crit = ks_critical_value(n, 0.01);
        c.detail << " mean=" << fmt(est.mean) << " rel_err=" << fmt(rel) << " ks=" << fmt(ks) << " crit=" << fmt(crit)
                 << " censored=" << est.n_censored << " mc_seconds=" << fmt(secs);
        c.require(std::abs(ig.mean() - 251.887) < 1e-3, "closed-form mean");
        c.require(rel < 0.02, "mean within 2%");
        c.require(ks < crit, "KS below 1% critical value");
    });

    report(2, "tangent approximation is exact at b = 0 (corrected form)", [](Check& c) {
        const InverseGaussian ig(fpt_ig_model2_b0(kLinearVol, kLevel));
        double worst = 0.0, printed_worst = 0.0;
        for (double t = 50.0; t <= 1000.0; t += 0.5) {
            const double ref = ig.pdf(t);
            worst = std::max(worst, std::abs(durbin_density_at(kLinearVol, kLevel, t, DurbinForm::Corrected) - ref) / ref);
            printed_worst =
                std::max(printed_worst, std::abs(durbin_density_at(kLinearVol, kLevel, t, DurbinForm::AsPrinted) - ref) / ref);
        }
        c.detail << " corrected_max_rel=" << fmt(worst) << " as_printed_max_rel=" << fmt(printed_worst);
        c.require(worst <= 1e-9, "corrected within 1e-9");
        c.require(printed_worst > 1e-3, "as_printed deviates");
    });

    report(3, "exact samplers reproduce closed-form moments (n = 1e5)", [](Check& c) {
        const std::size_t n = 100000;
        const double nn = static_cast<double>(n);
        const TimeGrid grid({0.0, 250.0, 500.0, 1000.0});
        double worst_z = 0.0;
        for (double b : kShapes) {
            const auto p = kConstVol.with_b(b);
            const auto e = simulate_ensemble(p, ModelKind::ConstantVol, Scheme::Exact, grid, n, 300 + 10 * b);
            for (std::size_t i : {std::size_t{1}, std::size_t{3}}) {
                const double t = grid[i];
                const auto m = model1_moments(p, t, t);
                const auto xs = column_at(e, i);
                worst_z = std::max(worst_z, std::abs(sample_mean(xs) - m.mean) / std::sqrt(m.variance / nn));
                worst_z = std::max(worst_z,
                                   std::abs(sample_variance(xs) - m.variance) / (m.variance * std::sqrt(2.0 / (nn - 1))));
            }
            const double cov = *model1_moments(p, 500.0, 1000.0).covariance;
            const double va = model1_moments(p, 500.0, 500.0).variance, vb = model1_moments(p, 1000.0, 1000.0).variance;
            const double z_cov =
                std::abs(sample_covariance(column_at(e, 2), column_at(e, 3)) - cov) / std::sqrt((va * vb + cov * cov) / nn);
            worst_z = std::max(worst_z, z_cov);

            const auto q = kLinearVol.with_b(b);
            const auto l = simulate_ensemble(q, ModelKind::LinearVol, Scheme::Exact, grid, n, 400 + 10 * b);
            for (std::size_t i : {std::size_t{1}, std::size_t{3}}) {
                std::vector<double> logs;
                for (double v : column_at(l, i)) logs.push_back(std::log(v));
                const auto m = model2_moments(q, grid[i]);
                const double s2 = *m.lognormal_scale2;
                worst_z = std::max(worst_z, std::abs(sample_mean(logs) - *m.lognormal_location) / std::sqrt(s2 / nn));
                worst_z = std::max(worst_z, std::abs(sample_variance(logs) - s2) / (s2 * std::sqrt(2.0 / (nn - 1))));
            }
        }
        c.detail << " max_standard_errors=" << fmt(worst_z);
        c.require(worst_z < 4.0, "all moments within 4 standard errors");
    });

    // Constant-volatility direct Monte Carlo samples, shared by criteria 4, 5.
    std::vector<FptEstimate> const_direct;

    report(4, "time change: tau identity and time-changed vs direct first passage", [&](Check& c) {
        double worst = 0.0;
        for (double b : {0.0, 0.1, 0.5, 1.0}) {
            const auto p = kConstVol.with_b(b);
            for (double t = 0.0; t <= 1e5; t += 25.0) {
                const double scale = std::max(t, 1.0);
                worst = std::max(worst, std::abs(time_change_tau_inv(p, time_change_tau(p, t)) - t) / scale);
                worst = std::max(worst, std::abs(time_change_tau(p, time_change_tau_inv(p, t)) - t) / scale);
            }
        }
        c.detail << " tau_roundtrip_max_rel=" << fmt(worst);
        c.require(worst <= 1e-12, "tau identity to 1e-12");
        const std::size_t n = 10000;
        const double crit = ks_critical_value(n, n, 0.01);
        c.detail << " crit=" << fmt(crit);
        for (double b : kShapes) {
            const auto p = kConstVol.with_b(b);
            const auto direct = fpt_mc(p, ModelKind::ConstantVol, fpt_config(kLevel, 2e4, 1.0, n, 500 + 10 * b));
            const auto clock = fpt_time_change_model1(p, fpt_config(kLevel, 2e4, 10.0, n, 600 + 10 * b));
            const double ks = ks_statistic(direct.samples, clock.samples);
            c.detail << " ks(b=" << fmt(b) << ")=" << fmt(ks);
            c.require(ks < crit, "KS b=" + fmt(b));
            const_direct.push_back(direct);
        }
    });

    std::vector<FptEstimate> linear_direct;

    report(5, "first-passage times stochastically increasing in b, both models", [&](Check& c) {
        const std::size_t n = 10000;
        for (double b : kShapes)
            linear_direct.push_back(
                fpt_mc(kLinearVol.with_b(b), ModelKind::LinearVol, fpt_config(kLevel, 1e5, 0.1, n, 700 + 10 * b)));
        for (const auto* groups : {&const_direct, &linear_direct}) {
            const char* name = groups == &const_direct ? "const-vol" : "linear-vol";
            c.require(groups->size() == kShapes.size(), std::string(name) + " samples available");
            for (std::size_t i = 0; i + 1 < groups->size(); ++i) {
                const auto& lo = (*groups)[i];
                const auto& hi = (*groups)[i + 1];
                const auto r = stochastic_order_check(lo.samples, hi.samples, 0.01, {999, 900 + i});
                c.detail << " " << name << "(" << fmt(kShapes[i]) << "<=" << fmt(kShapes[i + 1])
                         << "): violation=" << fmt(r.max_violation) << " p=" << fmt(r.p_value) << " means=" << fmt(lo.mean)
                         << "," << fmt(hi.mean);
                c.require(r.dominance_accepted, std::string(name) + " dominance");
                c.require(lo.mean <= hi.mean + 3.0 * pooled_se(lo, hi), std::string(name) + " means ordered");
            }
        }
    });

    report(6, "linear-volatility mean first-passage bounds", [&](Check& c) {
        c.require(linear_direct.size() == kShapes.size(), "linear-vol samples available");
        for (const auto& est : linear_direct) {
            const double bound = *mean_fpt_bounds(est.params, kLevel, ModelKind::LinearVol).lower_bound;
            c.detail << " b=" << fmt(est.params.b()) << ": bound=" << fmt(bound) << " mc=" << fmt(est.mean) << "+-"
                     << fmt(est.mean_std_error);
            c.require(est.n_censored == 0, "no censoring");
            c.require(bound <= est.mean + 3.0 * est.mean_std_error, "bound below MC mean");
        }
        const double limit = std::log(380.0 / kLevel) / 3e-4;
        const double at_zero = *mean_fpt_bounds(kLinearVol.with_sigma(0.0), kLevel, ModelKind::LinearVol).lower_bound;
        const double near_zero =
            *mean_fpt_bounds(ArpsParams::from_sigma2(380.0, 3e-4, 0.0, 1e-14), kLevel, ModelKind::LinearVol).lower_bound;
        c.detail << " sigma2->0: " << fmt(at_zero) << " / " << fmt(near_zero) << " vs ln(q0/x)/d0=" << fmt(limit);
        c.require(std::abs(at_zero - limit) <= 1e-9 * limit, "sigma2 = 0 limit");
        c.require(std::abs(near_zero - limit) <= 1e-9 * limit, "sigma2 = 1e-14 limit");
        c.require(std::abs(limit - 4450.0) < 0.01, "limit is 4450.0");
    });

    report(7, "Laplace transform of the Ornstein-Uhlenbeck first passage", [](Check& c) {
        const double at_zero = ou_fpt_laplace(kConstVol, kLevel, 0.0);
        const double h = 1e-8;
        const double fd = (1.0 - ou_fpt_laplace(kConstVol, kLevel, h)) / h;
        const auto est = fpt_mc(kConstVol, ModelKind::ConstantVol, fpt_config(kLevel, 1e5, 1.0, 10000, 1000));
        const double z = std::abs(fd - est.mean) / est.mean_std_error;
        const InverseGaussian ig(fpt_ig_model2_b0(kLinearVol, kLevel));
        const auto inv = laplace_invert([&](double s) { return ig.laplace(s); }, ig.mean());
        const double inv_rel = std::abs(inv.value - ig.pdf(ig.mean())) / ig.pdf(ig.mean());
        c.detail << " L(0)=" << fmt(at_zero) << " fd_mean=" << fmt(fd) << " analytic_mean=" << fmt(ou_fpt_mean(kConstVol, kLevel))
                 << " mc=" << fmt(est.mean) << "+-" << fmt(est.mean_std_error) << " z=" << fmt(z)
                 << " censored=" << est.n_censored << " stehfest_rel=" << fmt(inv_rel);
        c.require(at_zero == 1.0, "L(0) = 1 exactly");
        c.require(est.n_censored == 0, "no censoring");
        c.require(z < 3.0, "finite difference within 3 SE of MC");
        c.require(inv_rel < 1e-3, "IG inversion within 1e-3");
    });

    report(8, "special functions", [](Check& c) {
        double exp_worst = 0.0, erf_worst = 0.0;
        for (double a : {0.5, 1.0, 3.0})
            for (double z = -20.0; z <= 20.0; z += 0.5)
                exp_worst = std::max(exp_worst, std::abs(kummer_m(a, a, z) - std::exp(z)) / std::exp(z));
        for (double z = 0.05; z <= 6.0; z += 0.05) {
            const double ref = std::sqrt(std::numbers::pi) * std::erf(z) / (2.0 * z);
            erf_worst = std::max(erf_worst, std::abs(kummer_m(0.5, 1.5, -z * z) - ref) / ref);
        }
        const double sato = sato_phi1(1.0, 1.0, 1.0);
        const double oracle = sato_oracle(1.0, 1.0, 1.0);
        c.detail << " exp_identity_max_rel=" << fmt(exp_worst) << " erf_identity_max_rel=" << fmt(erf_worst)
                 << " sato=" << fmt(sato) << " oracle=" << fmt(oracle);
        c.require(exp_worst <= 1e-10, "e^z identity");
        c.require(erf_worst <= 1e-9, "erf identity");
        c.require(std::abs(sato - oracle) <= 1e-6, "Sato series");
    });

    report(9, "figures regenerate byte-identically across reruns and worker counts", [](Check& c) {
        const fs::path root = fs::temp_directory_path() / "arps_sde_acceptance_figures";
        fs::remove_all(root);
        std::ostringstream sink, errs;
        const std::vector<std::pair<std::string, std::string>> runs{{"a", "1"}, {"b", "4"}, {"c", "1"}};
        for (const auto& [dir, workers] : runs) {
            const int rc = cli::run({"figures", "--out-dir", (root / dir).string(), "--workers", workers}, sink, errs);
            c.require(rc == 0, "figures exit code (" + errs.str() + ")");
        }
        const std::vector<std::string> names{"fig1", "fig2", "fig3", "fig4a", "fig4b"};
        std::size_t files = 0;
        for (const auto& name : names)
            for (const char* ext : {".csv", ".json", ".svg"}) {
                const auto a = slurp(root / "a" / (name + ext));
                c.require(!a.empty(), name + ext + " written");
                c.require(a == slurp(root / "b" / (name + ext)), name + ext + " identical across workers");
                c.require(a == slurp(root / "c" / (name + ext)), name + ext + " identical across reruns");
                ++files;
            }

        // Shape checks.
        const auto fig1 = load_csv(root / "a" / "fig1.csv");
        c.require(fig1.columns.size() == 6, "fig1 has one path per b");
        std::size_t ordered = 0, points = fig1.columns[0].size();
        for (std::size_t i = 0; i < points; ++i) {
            bool ok = true;
            for (std::size_t k = 1; k + 1 < fig1.columns.size(); ++k) ok = ok && fig1.columns[k][i] <= fig1.columns[k + 1][i];
            ordered += ok;
        }
        for (std::size_t k = 1; k < fig1.columns.size(); ++k) c.require(fig1.columns[k][0] == 380.0, "fig1 starts at q0");
        c.detail << " files=" << files << " fig1_ordered_fraction=" << fmt(static_cast<double>(ordered) / points);
        c.require(fig1.columns.back().back() > fig1.columns[1].back(), "fig1 b=1 ends above b=0");

        const auto fig2 = load_csv(root / "a" / "fig2.csv");
        for (std::size_t k = 1; k < fig2.columns.size(); ++k)
            for (double v : fig2.columns[k]) c.require(v > 0.0, "fig2 positive");

        const auto fig3 = load_csv(root / "a" / "fig3.csv");
        double prev_mode = 0.0;
        for (std::size_t k = 1; k < fig3.columns.size(); ++k) {
            const auto& d = fig3.columns[k];
            const auto peak = std::max_element(d.begin(), d.end()) - d.begin();
            bool unimodal = true;
            for (std::ptrdiff_t i = 1; i < static_cast<std::ptrdiff_t>(d.size()); ++i)
                unimodal = unimodal && (i <= peak ? d[i] >= d[i - 1] : d[i] <= d[i - 1]);
            c.require(unimodal, "fig3 unimodal");
            const double mode = fig3.columns[0][peak];
            c.require(mode >= prev_mode, "fig3 mode nondecreasing in b");
            prev_mode = mode;
        }
        // Constant-volatility rates may turn negative late in the horizon.
        for (const auto& [name, until] : {std::pair{"fig4a.csv", 2000.0}, std::pair{"fig4b.csv", 1e300}}) {
            const auto t = load_csv(root / "a" / name);
            for (std::size_t k = 1; k < t.columns.size(); ++k) {
                c.require(t.columns[k][0] == 0.0, std::string(name) + " starts at 0");
                for (std::size_t i = 1; i < t.columns[k].size() && t.columns[0][i] <= until; ++i)
                    c.require(t.columns[k][i] >= t.columns[k][i - 1], std::string(name) + " nondecreasing");
            }
        }
        c.detail << " fig3_mode_b1=" << fmt(prev_mode);
        fs::remove_all(root);
    });

    std::printf("%s: %d criterion(s) failed\n", failures ? "FAIL" : "PASS", failures);
    return failures ? 1 : 0;
}
