#include "arps/decline.hpp"
#include "arps/fpt.hpp"
#include "arps/specfun.hpp"
#include "arps/stats.hpp"

#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <vector>

namespace arps {
namespace {

const ArpsParams kFig3 = ArpsParams::from_sigma2(380.0, 3e-4, 0.0, 0.01);
const ArpsParams kFig1(380.0, 3e-4, 0.5, 1.0);

FptConfig config(double x, double horizon, double dt, std::size_t n, std::uint64_t seed, bool bridge = true) {
    FptConfig c;
    c.x = x;
    c.horizon = horizon;
    c.dt = dt;
    c.n_paths = n;
    c.seed = seed;
    c.bridge = bridge;
    return c;
}

double pooled_se(const FptEstimate& a, const FptEstimate& b) {
    return std::sqrt(a.mean_std_error * a.mean_std_error + b.mean_std_error * b.mean_std_error);
}

TEST(FptConfigTest, Validation) {
    EXPECT_THROW(fpt_mc(kFig3, ModelKind::LinearVol, config(100.0, 100.0, 0.0, 10, 1)), DomainError);
    EXPECT_THROW(fpt_mc(kFig3, ModelKind::LinearVol, config(100.0, -1.0, 1.0, 10, 1)), DomainError);
    EXPECT_THROW(fpt_mc(kFig3, ModelKind::LinearVol, config(100.0, 100.0, 1.0, 0, 1)), DomainError);
    EXPECT_THROW(fpt_mc(kFig3, ModelKind::LinearVol, config(-5.0, 100.0, 1.0, 10, 1)), DomainError);
}

TEST(InverseGaussianLawTest, ClosedForm) {
    const auto ig = fpt_ig_model2_b0(kFig3, 100.0);
    EXPECT_NEAR(ig.m, 251.887, 5e-4);
    EXPECT_NEAR(ig.lambda, 178.222, 1e-3);
    const auto near = fpt_ig_model2_b0(kFig3, 379.999);
    EXPECT_LT(near.m, 1e-3);
    EXPECT_LT(near.lambda, 1e-8);
    const auto quiet = fpt_ig_model2_b0(kFig3.with_sigma(1e-7), 100.0);
    EXPECT_NEAR(quiet.m, std::log(3.8) / 3e-4, 1e-9 * quiet.m);
    EXPECT_THROW(fpt_ig_model2_b0(kFig3.with_b(0.5), 100.0), DomainError);
    EXPECT_THROW(fpt_ig_model2_b0(kFig3, 380.0), DomainError);
}

TEST(FptMcTest, LevelAtOrAboveStartIsHitImmediately) {
    for (auto model : {ModelKind::ConstantVol, ModelKind::LinearVol}) {
        const auto est = fpt_mc(kFig1, model, config(380.0, 100.0, 1.0, 50, 3));
        EXPECT_EQ(est.n_censored, 0u);
        for (double s : est.samples) EXPECT_EQ(s, 0.0);
        EXPECT_EQ(est.mean, 0.0);
    }
    const auto tc = fpt_time_change_model1(kFig1, config(500.0, 100.0, 1.0, 20, 3));
    for (double s : tc.samples) EXPECT_EQ(s, 0.0);
}

TEST(FptMcTest, NoiselessLimitIsDeterministicCrossing) {
    const double crossing = std::log(3.8) / 3e-4;
    EXPECT_NEAR(crossing, 4450.0, 0.01);
    const auto p = ArpsParams(380.0, 3e-4, 0.0, 1e-6);
    const auto est = fpt_mc(p, ModelKind::ConstantVol, config(100.0, 6000.0, 0.5, 200, 1));
    EXPECT_EQ(est.n_censored, 0u);
    for (double s : est.samples) {
        EXPECT_GE(s, crossing - 0.5);
        EXPECT_LE(s, crossing + 0.5);
    }
}

TEST(FptMcTest, LinearVolMatchesInverseGaussian) {
    const InverseGaussian ig(fpt_ig_model2_b0(kFig3, 100.0));
    const auto est = fpt_mc(kFig3, ModelKind::LinearVol, config(100.0, 1e4, 0.25, 5000, 2024));
    EXPECT_EQ(est.n_censored, 0u);
    EXPECT_NEAR(est.mean, ig.mean(), 4.0 * est.mean_std_error);
    EXPECT_LT(ks_statistic(est.samples, [&](double t) { return ig.cdf(t); }), ks_critical_value(5000, 0.01));
}

TEST(FptMcTest, BridgeRemovesDiscreteMonitoringBias) {
    const InverseGaussian ig(fpt_ig_model2_b0(kFig3, 100.0));
    const std::size_t n = 40000;
    const auto on = fpt_mc(kFig3, ModelKind::LinearVol, config(100.0, 2e4, 4.0, n, 17, true));
    const auto off4 = fpt_mc(kFig3, ModelKind::LinearVol, config(100.0, 2e4, 4.0, n, 17, false));
    const auto off1 = fpt_mc(kFig3, ModelKind::LinearVol, config(100.0, 2e4, 1.0, n, 17, false));
    // Same Gaussian draws: the bridge can only bring a hit forward.
    for (std::size_t k = 0; k < n; ++k) ASSERT_LE(on.samples[k], off4.samples[k]);
    EXPECT_NEAR(on.mean, ig.mean(), 4.0 * on.mean_std_error);
    EXPECT_GT(off1.mean - ig.mean(), 3.0 * off1.mean_std_error);
    EXPECT_GT(off4.mean - off1.mean, 3.0 * pooled_se(off4, off1));
}

TEST(FptMcTest, CensoringMonotoneInHorizon) {
    const auto short_run = fpt_mc(kFig1, ModelKind::ConstantVol, config(100.0, 3000.0, 1.0, 500, 5));
    const auto long_run = fpt_mc(kFig1, ModelKind::ConstantVol, config(100.0, 9000.0, 1.0, 500, 5));
    EXPECT_GT(short_run.n_censored, long_run.n_censored);
    for (double t = 0.0; t <= 3000.0; t += 100.0) EXPECT_GE(long_run.survival(t), short_run.survival(t));
    EXPECT_EQ(short_run.survival(0.0), 1.0);
    EXPECT_THROW(short_run.survival(3001.0), DomainError);
    for (std::size_t k = 0; k < 500; ++k) {
        EXPECT_LE(short_run.samples[k], 3000.0);
        if (short_run.censored[k]) EXPECT_EQ(short_run.samples[k], 3000.0);
    }
    EXPECT_EQ(short_run.hits().size(), 500 - short_run.n_censored);
    EXPECT_DOUBLE_EQ(short_run.censored_fraction, short_run.n_censored / 500.0);
}

TEST(FptMcTest, QuantilesFlagCensoredTail) {
    const auto est = fpt_mc(kFig1, ModelKind::ConstantVol, config(100.0, 3000.0, 1.0, 400, 5));
    ASSERT_EQ(est.quantiles.size(), 7u);
    for (const auto& q : est.quantiles) {
        const bool in_tail = q.p > 1.0 - est.censored_fraction;
        EXPECT_EQ(q.lower_bound, in_tail) << q.p;
        if (in_tail) {
            EXPECT_EQ(q.value, 3000.0);
            EXPECT_TRUE(std::isnan(q.std_error));
        }
    }
    const auto full = fpt_mc(kFig3, ModelKind::LinearVol, config(100.0, 1e4, 1.0, 400, 5));
    for (std::size_t i = 1; i < full.quantiles.size(); ++i)
        EXPECT_GE(full.quantiles[i].value, full.quantiles[i - 1].value);
    EXPECT_GT(full.quantiles[3].std_error, 0.0);
}

TEST(FptMcTest, WorkerCountDoesNotChangeSamples) {
    auto c = config(100.0, 2000.0, 1.0, 301, 77);
    c.workers = 1;
    const auto a = fpt_mc(kFig1, ModelKind::ConstantVol, c);
    c.workers = 5;
    const auto b = fpt_mc(kFig1, ModelKind::ConstantVol, c);
    EXPECT_EQ(a.samples, b.samples);
    EXPECT_EQ(a.censored, b.censored);
    c.workers = 3;
    EXPECT_EQ(fpt_time_change_model1(kFig1, c).samples, [&] {
        c.workers = 1;
        return fpt_time_change_model1(kFig1, c).samples;
    }());
}

TEST(FptMcTest, MeansNondecreasingInShape) {
    for (auto model : {ModelKind::ConstantVol, ModelKind::LinearVol}) {
        const ArpsParams base = model == ModelKind::ConstantVol ? kFig1 : kFig3;
        std::vector<FptEstimate> runs;
        for (double b : {0.0, 0.25, 0.5, 0.75, 1.0})
            runs.push_back(fpt_mc(base.with_b(b), model, config(100.0, 1e6, 5.0, 1500, 31)));
        for (std::size_t i = 0; i + 1 < runs.size(); ++i) {
            EXPECT_EQ(runs[i].n_censored, 0u);
            EXPECT_LE(runs[i].mean, runs[i + 1].mean + 3.0 * pooled_se(runs[i], runs[i + 1]));
        }
    }
}

TEST(TimeChangeFptTest, AgreesWithDirectSimulation) {
    for (double b : {0.0, 0.5, 1.0}) {
        const auto p = kFig1.with_b(b);
        const double horizon = 2e4;
        const auto direct = fpt_mc(p, ModelKind::ConstantVol, config(100.0, horizon, 1.0, 3000, 1));
        const auto clock = fpt_time_change_model1(p, config(100.0, horizon, 10.0, 3000, 2));
        EXPECT_LT(ks_statistic(direct.samples, clock.samples), ks_critical_value(3000, 3000, 0.01)) << "b=" << b;
    }
    EXPECT_THROW(fpt_time_change_model1(kFig1.with_sigma(0.0), config(100.0, 100.0, 1.0, 10, 1)), DomainError);
}

TEST(TimeChangeFptTest, OrnsteinUhlenbeckMeanHittingTime) {
    const auto p = kFig1.with_b(0.0);
    const auto est = fpt_time_change_model1(p, config(100.0, 1e5, 5.0, 4000, 9));
    EXPECT_EQ(est.n_censored, 0u);
    EXPECT_NEAR(est.mean, ou_fpt_mean(p, 100.0), 4.0 * est.mean_std_error);
}

TEST(DurbinTest, CorrectedFormIsExactForLinearBoundary) {
    const InverseGaussian ig(fpt_ig_model2_b0(kFig3, 100.0));
    for (double t = 50.0; t <= 1000.0; t += 9.5) {
        const double d = durbin_density_at(kFig3, 100.0, t, DurbinForm::Corrected);
        EXPECT_NEAR(d, ig.pdf(t), 1e-9 * ig.pdf(t)) << t;
        EXPECT_NEAR(durbin_density_at(kFig3.with_b(kShapeEpsilon), 100.0, t, DurbinForm::Corrected), ig.pdf(t),
                    1e-6 * ig.pdf(t));
    }
    EXPECT_NEAR(durbin_density_at(kFig3, 100.0, 250.0, DurbinForm::Corrected), 1.347e-3, 5e-7);
    EXPECT_EQ(durbin_density_at(kFig3, 100.0, 0.0, DurbinForm::Corrected), 0.0);
}

TEST(DurbinTest, AsPrintedFormDeviates) {
    const InverseGaussian ig(fpt_ig_model2_b0(kFig3, 100.0));
    for (double t : {50.0, 250.0, 1000.0}) {
        const double printed = durbin_density_at(kFig3, 100.0, t, DurbinForm::AsPrinted);
        EXPECT_GT(std::abs(printed - ig.pdf(t)), 1e-3 * ig.pdf(t)) << t;
    }
    // prefactor difference is exactly 2 d0 / sigma times f(t)
    const double t = 400.0;
    const double c = durbin_density_at(kFig3, 100.0, t, DurbinForm::Corrected);
    const double a = durbin_density_at(kFig3, 100.0, t, DurbinForm::AsPrinted);
    const double level = boundary_c2(kFig3, 100.0, t).level;
    const double f = std::exp(-level * level / (2.0 * t)) / std::sqrt(2.0 * std::numbers::pi * t);
    EXPECT_NEAR(c - a, 2.0 * 3e-4 / 0.1 * f, 1e-12);
}

TEST(DurbinTest, NormalizationAndClamping) {
    const auto grid = TimeGrid::uniform(0.5, 5000.0);
    for (double b : {0.0, 0.5, 1.0}) {
        const auto curve = durbin_density(kFig3.with_b(b), 100.0, grid);
        EXPECT_EQ(curve.clamp_count, 0u);
        EXPECT_LT(curve.normalization_defect, 0.05) << b;
        const double mass = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
            [&](double t) { return durbin_density_at(kFig3.with_b(b), 100.0, t, DurbinForm::Corrected); }, 0.0, 5000.0,
            15, 1e-10);
        EXPECT_NEAR(mass, 1.0, 0.05);
        EXPECT_NEAR(1.0 - mass, 1.0 - (1.0 - curve.normalization_defect), 1e-3);
        for (double v : curve.values) EXPECT_GE(v, 0.0);
    }
    EXPECT_THROW(durbin_density(kFig3.with_sigma(0.0), 100.0, grid), DomainError);
    EXPECT_THROW(durbin_density(kFig3, 400.0, grid), DomainError);
    EXPECT_EQ(parse_durbin_form("as_printed"), DurbinForm::AsPrinted);
    EXPECT_THROW(parse_durbin_form("flipped"), DomainError);
}

TEST(MeanBoundsTest, LinearVolBound) {
    const auto r = mean_fpt_bounds(kFig3, 100.0, ModelKind::LinearVol);
    ASSERT_TRUE(r.lower_bound);
    EXPECT_NEAR(*r.lower_bound, 251.887, 5e-4);
    const double limit = std::log(3.8) / 3e-4;
    EXPECT_NEAR(*mean_fpt_bounds(kFig3.with_sigma(0.0), 100.0, ModelKind::LinearVol).lower_bound, limit, 1e-9 * limit);
    EXPECT_NEAR(*mean_fpt_bounds(kFig3.with_sigma(1e-7), 100.0, ModelKind::LinearVol).lower_bound, limit, 1e-9 * limit);
    EXPECT_NEAR(limit, 4450.0, 4450.0 * 1e-6);
    EXPECT_THROW(mean_fpt_bounds(kFig3, 380.0, ModelKind::LinearVol), DomainError);
}

TEST(MeanBoundsTest, LinearVolBoundBelowMonteCarlo) {
    for (double b : {0.0, 0.5, 1.0}) {
        const auto p = kFig3.with_b(b);
        const auto est = fpt_mc(p, ModelKind::LinearVol, config(100.0, 1e5, 0.5, 2000, 12));
        EXPECT_EQ(est.n_censored, 0u);
        EXPECT_LE(*mean_fpt_bounds(p, 100.0, ModelKind::LinearVol).lower_bound, est.mean + 3.0 * est.mean_std_error);
    }
}

TEST(MeanBoundsTest, ConstantVolSeriesReport) {
    const auto p = kFig1.with_b(0.0);
    const auto r = mean_fpt_bounds(p, 100.0, ModelKind::ConstantVol);
    ASSERT_TRUE(r.log_phi_x && r.log_phi_q0 && r.as_printed && r.magnitude);
    EXPECT_NEAR(*r.log_phi_x, sato_phi1_log(3e-4, 1.0, 100.0), 1e-12);
    EXPECT_LT(*r.as_printed, 0.0);
    EXPECT_EQ(*r.magnitude, -*r.as_printed);
    EXPECT_FALSE(r.note.empty());
    EXPECT_FALSE(r.lower_bound);
}

TEST(OrderCheckTest, TrivialCases) {
    std::vector<double> a;
    for (int i = 0; i < 300; ++i) a.push_back(std::fmod(i * 37.0, 101.0));
    auto shifted = a;
    for (double& v : shifted) v += 1.0;
    const auto same = stochastic_order_check(a, a, 0.01, {199, 1});
    EXPECT_EQ(same.max_violation, 0.0);
    EXPECT_TRUE(same.dominance_accepted);
    EXPECT_TRUE(same.means_ordered);
    const auto up = stochastic_order_check(a, shifted, 0.01, {199, 1});
    EXPECT_EQ(up.max_violation, 0.0);
    EXPECT_TRUE(up.dominance_accepted);
    EXPECT_EQ(up.permutations, 199u);
    auto down = a;
    for (double& v : down) v -= 60.0;
    const auto bad = stochastic_order_check(a, down, 0.01, {199, 1});
    EXPECT_GT(bad.max_violation, 0.5);
    EXPECT_FALSE(bad.dominance_accepted);
    EXPECT_FALSE(bad.means_ordered);
    EXPECT_LT(bad.p_value, 0.01);
    EXPECT_THROW(stochastic_order_check({}, a, 0.01), DomainError);
    EXPECT_THROW(stochastic_order_check(a, a, 1.5), DomainError);
}

TEST(OrderCheckTest, ShapeOrderingOfHittingTimes) {
    const auto lo = fpt_mc(kFig3, ModelKind::LinearVol, config(100.0, 1e5, 1.0, 2000, 4));
    const auto hi = fpt_mc(kFig3.with_b(1.0), ModelKind::LinearVol, config(100.0, 1e5, 1.0, 2000, 4));
    const auto r = stochastic_order_check(lo.samples, hi.samples, 0.01);
    EXPECT_TRUE(r.dominance_accepted);
    EXPECT_TRUE(r.means_ordered);
    EXPECT_EQ(stochastic_order_check(lo.samples, hi.samples, 0.01).p_value, r.p_value);
}

}  // namespace
}  // namespace arps
