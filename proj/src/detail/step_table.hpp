#pragma once

#include <cmath>
#include <vector>

#include "arps/decline.hpp"
#include "arps/sim.hpp"

namespace arps::detail {

struct StepState {
    double value;
    double driver;  // Z (const-vol exact) or B (linear-vol exact); unused by Euler
};

// Per-step coefficients shared by all paths on one grid.
class StepTable {
public:
    StepTable(const ArpsParams& p, ModelKind model, Scheme scheme, const TimeGrid& grid)
        : params_(p), model_(model), scheme_(scheme), grid_(grid) {
        const std::size_t n = grid.size();
        scale_.resize(n - 1);
        if (scheme == Scheme::EulerMaruyama) {
            drift_.resize(n - 1);
            for (std::size_t i = 0; i + 1 < n; ++i) {
                const double dt = grid[i + 1] - grid[i];
                drift_[i] = p.d0() / (1.0 + p.b() * p.d0() * grid[i]) * dt;
                scale_[i] = std::sqrt(dt);
            }
            return;
        }
        level_.resize(n);
        for (std::size_t i = 0; i < n; ++i)
            level_[i] = model == ModelKind::ConstantVol ? decay_factor(p, grid[i])
                                                        : log_decay(p, grid[i]) - 0.5 * p.sigma2() * grid[i];
        for (std::size_t i = 0; i + 1 < n; ++i)
            scale_[i] = model == ModelKind::ConstantVol ? std::sqrt(time_change_tau_increment(p, grid[i], grid[i + 1]))
                                                        : std::sqrt(grid[i + 1] - grid[i]);
    }

    const TimeGrid& grid() const noexcept { return grid_; }
    StepState initial() const noexcept { return {params_.q0(), 0.0}; }

    // Advances from grid point i to i + 1 with standard normal `xi`.
    double advance(std::size_t i, double xi, StepState& s) const noexcept {
        const double sigma = params_.sigma();
        if (scheme_ == Scheme::EulerMaruyama) {
            const double q = s.value;
            const double vol = model_ == ModelKind::LinearVol ? sigma * q : sigma;
            s.value = q - drift_[i] * q + vol * scale_[i] * xi;
        } else if (model_ == ModelKind::ConstantVol) {
            // Q_t = q(t)/q0 (q0 + sigma Z_t)
            s.driver += scale_[i] * xi;
            s.value = level_[i + 1] * (params_.q0() + sigma * s.driver);
        } else {
            s.driver += scale_[i] * xi;
            s.value = params_.q0() * std::exp(level_[i + 1] + sigma * s.driver);
        }
        return s.value;
    }

private:
    ArpsParams params_;
    ModelKind model_;
    Scheme scheme_;
    TimeGrid grid_;
    std::vector<double> level_;  // decay factor (const-vol) or deterministic log part (linear-vol)
    std::vector<double> drift_;  // Euler decay per step
    std::vector<double> scale_;  // noise standard deviation per step
};

}  // namespace arps::detail
