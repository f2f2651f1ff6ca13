#include "arps/sim.hpp"

#include <cmath>
#include <new>
#include <string>

#include "arps/decline.hpp"
#include "arps/parallel.hpp"
#include "detail/step_table.hpp"

namespace arps {

std::string_view to_string(Scheme scheme) {
    switch (scheme) {
        case Scheme::EulerMaruyama: return "em";
        case Scheme::Exact: return "exact";
    }
    return "unknown";
}

Scheme parse_scheme(std::string_view name) {
    if (name == "em" || name == "euler" || name == "euler-maruyama") return Scheme::EulerMaruyama;
    if (name == "exact") return Scheme::Exact;
    throw DomainError("unknown scheme '" + std::string(name) + "' (expected em or exact)");
}

TimeGrid::TimeGrid(std::vector<double> points) {
    if (points.empty() || points.front() != 0.0) throw DomainError("time grid must start at 0");
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!std::isfinite(points[i])) throw DomainError("time grid points must be finite");
        if (i > 0 && !(points[i] > points[i - 1])) throw DomainError("time grid must be strictly increasing");
    }
    points_ = std::make_shared<const std::vector<double>>(std::move(points));
}

TimeGrid TimeGrid::uniform(double dt, double horizon) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("dt must be > 0");
    if (!(horizon > 0.0) || !std::isfinite(horizon)) throw DomainError("horizon must be > 0");
    const auto steps = static_cast<std::size_t>(std::ceil(horizon / dt - 1e-9));
    std::vector<double> points(steps + 1);
    for (std::size_t i = 0; i <= steps; ++i) points[i] = std::min(static_cast<double>(i) * dt, horizon);
    points.back() = horizon;
    return TimeGrid(std::move(points));
}

double linear_vol_exact_value(const ArpsParams& p, double t, double brownian) {
    return p.q0() * std::exp(log_decay(p, t) - 0.5 * p.sigma2() * t + p.sigma() * brownian);
}

namespace {

Path run_path(const detail::StepTable& table, ModelKind model, NoiseSpec noise) {
    const auto& grid = table.grid();
    const std::size_t n = grid.size();
    Path path{grid, std::vector<double>(n), 0};
    auto state = table.initial();
    path.values[0] = state.value;
    const CounterStream stream(noise);
    std::array<double, 2> pair{};
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (i % 2 == 0) pair = stream.normal_pair(i / 2);
        const double q = table.advance(i, pair[i % 2], state);
        path.values[i + 1] = q;
        if (model == ModelKind::LinearVol && q <= 0.0) ++path.nonpositive_steps;
    }
    return path;
}

}  // namespace

Path simulate_path(const ArpsParams& p, ModelKind model, Scheme scheme, const TimeGrid& grid, NoiseSpec noise) {
    return run_path(detail::StepTable(p, model, scheme, grid), model, noise);
}

TimeSummary summarize(std::span<const Path> paths) {
    if (paths.empty()) throw DomainError("cannot summarize an empty set of paths");
    const std::size_t n = paths.front().values.size();
    TimeSummary s{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
    for (const auto& path : paths) {
        if (path.values.size() != n) throw DomainError("paths must share one grid");
        for (std::size_t i = 0; i < n; ++i) s.mean[i] += path.values[i];
    }
    const double count = static_cast<double>(paths.size());
    for (auto& m : s.mean) m /= count;
    if (paths.size() < 2) return s;
    for (const auto& path : paths)
        for (std::size_t i = 0; i < n; ++i) {
            const double d = path.values[i] - s.mean[i];
            s.variance[i] += d * d;
        }
    for (auto& v : s.variance) v /= count - 1.0;
    return s;
}

PathEnsemble simulate_ensemble(const ArpsParams& p, ModelKind model, Scheme scheme, const TimeGrid& grid,
                               std::size_t n_paths, std::uint64_t seed, unsigned workers) {
    if (n_paths < 1) throw DomainError("an ensemble needs at least one path");
    const detail::StepTable table(p, model, scheme, grid);
    std::vector<Path> paths;
    try {
        paths.resize(n_paths, Path{grid, {}, 0});
        parallel_for(n_paths, resolve_workers(workers), [&](std::size_t begin, std::size_t end) {
            for (std::size_t k = begin; k < end; ++k) paths[k] = run_path(table, model, NoiseSpec{seed, k});
        });
    } catch (const std::bad_alloc&) {
        throw std::runtime_error("ensemble of " + std::to_string(n_paths) + " paths x " + std::to_string(grid.size()) +
                                 " points does not fit in memory");
    }
    auto summary = summarize(paths);
    return PathEnsemble{p, model, scheme, seed, grid, std::move(paths), std::move(summary.mean),
                        std::move(summary.variance)};
}

Path cumulative_path(const Path& path) {
    Path out{path.grid, std::vector<double>(path.values.size(), 0.0), 0};
    for (std::size_t i = 0; i + 1 < path.values.size(); ++i)
        out.values[i + 1] = out.values[i] + 0.5 * (path.values[i] + path.values[i + 1]) * (path.grid[i + 1] - path.grid[i]);
    return out;
}

}  // namespace arps
