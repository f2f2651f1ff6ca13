#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "arps/params.hpp"
#include "arps/rng.hpp"

namespace arps {

enum class Scheme { EulerMaruyama, Exact };

std::string_view to_string(Scheme scheme);
Scheme parse_scheme(std::string_view name);

/// Immutable, strictly increasing time points starting at 0. Copies share
/// storage.
class TimeGrid {
public:
    explicit TimeGrid(std::vector<double> points);

    /// 0, dt, 2 dt, ..., with the last point clamped to `horizon`.
    static TimeGrid uniform(double dt, double horizon);

    std::size_t size() const noexcept { return points_->size(); }
    double operator[](std::size_t i) const noexcept { return (*points_)[i]; }
    std::span<const double> points() const noexcept { return *points_; }
    double horizon() const noexcept { return points_->back(); }

private:
    std::shared_ptr<const std::vector<double>> points_;
};

struct Path {
    TimeGrid grid;
    std::vector<double> values;
    /// Euler steps that left the positive half-line (linear-volatility model).
    std::size_t nonpositive_steps = 0;
};

/// Q_t = q0 exp(ln(q_t/q0) - sigma^2 t / 2 + sigma B_t) for a given B_t.
double linear_vol_exact_value(const ArpsParams& p, double t, double brownian);

/// One trajectory. Step i (t_i -> t_{i+1}) consumes Gaussian draw i of
/// `noise`, whatever the scheme or parameters, so paths for different b
/// share their noise.
Path simulate_path(const ArpsParams& p, ModelKind model, Scheme scheme, const TimeGrid& grid, NoiseSpec noise);

struct PathEnsemble {
    ArpsParams params;
    ModelKind model;
    Scheme scheme;
    std::uint64_t seed;
    TimeGrid grid;
    /// Path k uses NoiseSpec{seed, k}.
    std::vector<Path> paths;
    std::vector<double> mean;
    std::vector<double> variance;
};

struct TimeSummary {
    std::vector<double> mean;
    std::vector<double> variance;  // unbiased; 0 for a single path
};

/// Per-time mean and variance, summed in path order.
TimeSummary summarize(std::span<const Path> paths);

PathEnsemble simulate_ensemble(const ArpsParams& p, ModelKind model, Scheme scheme, const TimeGrid& grid,
                               std::size_t n_paths, std::uint64_t seed, unsigned workers = 0);

/// Trapezoidal running integral of the path on its own grid.
Path cumulative_path(const Path& path);

}  // namespace arps
