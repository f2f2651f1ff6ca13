#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "arps/decline.hpp"
#include "arps/fpt.hpp"
#include "arps/io.hpp"
#include "arps/sim.hpp"
#include "arps/specfun.hpp"
#include "arps/stats.hpp"

namespace arps::cli {
namespace {

using io::Json;

constexpr const char* kVersion = "1.0.0";

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Raw flags as given; unset values fall back to the preset, then to the
// command default.
struct Flags {
    std::string preset;
    std::optional<std::string> model, scheme, form, method;
    std::optional<double> q0, d0, sigma2, dt, horizon, x, alpha, s;
    std::vector<double> b, at;
    std::optional<std::size_t> paths, permutations;
    std::optional<std::uint64_t> seed;
    std::optional<bool> bridge;
    std::string out, json, svg, out_dir = "figures";
    bool samples = false;
    unsigned workers = 0;
};

struct Run {
    std::string command;
    std::string preset;
    ModelKind model = ModelKind::ConstantVol;
    Scheme scheme = Scheme::EulerMaruyama;
    double q0 = 380.0, d0 = 3e-4, sigma2 = 1.0;
    std::vector<double> b{0.5};
    double dt = 1.0, horizon = 1e4;
    std::size_t paths = 5;
    std::uint64_t seed = 1;
    double x = 100.0;
    bool bridge = true;
    std::string method = "mc";
    std::string form = "corrected";
    double alpha = 0.01;
    std::size_t permutations = 999;
    std::vector<double> at;
    std::optional<double> s;
    bool samples = false;
    unsigned workers = 0;

    ArpsParams params(double shape) const { return ArpsParams::from_sigma2(q0, d0, shape, sigma2); }
};

const std::vector<double> kFigureShapes{0.0, 0.25, 0.5, 0.75, 1.0};

struct Preset {
    ModelKind model;
    std::optional<Scheme> scheme;
    double sigma2;
    std::vector<double> b;
    double dt;
    double horizon;
    std::size_t paths;
};

const std::map<std::string, Preset>& presets() {
    static const std::map<std::string, Preset> table{
        {"fig1", {ModelKind::ConstantVol, Scheme::EulerMaruyama, 1.0, kFigureShapes, 1.0, 1e4, 1}},
        {"fig2", {ModelKind::LinearVol, Scheme::EulerMaruyama, 0.01, kFigureShapes, 0.5, 500.0, 1}},
        {"fig3", {ModelKind::LinearVol, std::nullopt, 0.01, kFigureShapes, 0.5, 1000.0, 1}},
        {"fig4a", {ModelKind::ConstantVol, Scheme::EulerMaruyama, 1.0, {0.5}, 1.0, 1e4, 5}},
        {"fig4b", {ModelKind::LinearVol, Scheme::EulerMaruyama, 0.01, {0.5}, 0.5, 500.0, 5}},
    };
    return table;
}

Run command_defaults(const std::string& command) {
    Run r;
    r.command = command;
    if (command == "moments") {
        r.dt = 10.0;
    } else if (command == "fpt") {
        r.model = ModelKind::LinearVol;
        r.scheme = Scheme::Exact;
        r.sigma2 = 0.01;
        r.b = {0.0};
        r.dt = 0.05;
        r.paths = 10000;
    } else if (command == "durbin") {
        r.model = ModelKind::LinearVol;
        r.sigma2 = 0.01;
        r.b = {0.0, 0.5, 1.0};
        r.horizon = 5000.0;
    } else if (command == "order-check") {
        r.model = ModelKind::LinearVol;
        r.scheme = Scheme::Exact;
        r.sigma2 = 0.01;
        r.b = {0.0, 0.5, 1.0};
        r.horizon = 1e5;
        r.paths = 10000;
    }
    return r;
}

Run resolve(const std::string& command, const Flags& f) {
    Run r = command_defaults(command);
    if (!f.preset.empty()) {
        const auto it = presets().find(f.preset);
        if (it == presets().end()) throw UsageError("unknown preset '" + f.preset + "'");
        const Preset& p = it->second;
        r.preset = f.preset;
        r.model = p.model;
        if (p.scheme) r.scheme = *p.scheme;
        r.sigma2 = p.sigma2;
        r.b = p.b;
        r.dt = p.dt;
        r.horizon = p.horizon;
        r.paths = p.paths;
    }
    if (f.model) {
        r.model = parse_model(*f.model);
        // The volatility scale differs by model; follow the model unless set.
        if (f.preset.empty() && !f.sigma2) r.sigma2 = r.model == ModelKind::ConstantVol ? 1.0 : 0.01;
    }
    if (f.scheme) r.scheme = parse_scheme(*f.scheme);
    if (f.q0) r.q0 = *f.q0;
    if (f.d0) r.d0 = *f.d0;
    if (f.sigma2) r.sigma2 = *f.sigma2;
    if (!f.b.empty()) r.b = f.b;
    if (f.method) r.method = *f.method;
    if (command == "fpt" && r.method == "time-change" && !f.dt && f.preset.empty()) r.dt = 10.0;
    if (f.dt) r.dt = *f.dt;
    if (f.horizon) r.horizon = *f.horizon;
    if (f.paths) r.paths = *f.paths;
    if (f.seed) r.seed = *f.seed;
    if (f.x) r.x = *f.x;
    if (f.bridge) r.bridge = *f.bridge;
    if (f.form) r.form = *f.form;
    if (f.alpha) r.alpha = *f.alpha;
    if (f.permutations) r.permutations = *f.permutations;
    r.at = f.at;
    r.s = f.s;
    r.samples = f.samples;
    r.workers = f.workers;

    for (double b : r.b) (void)r.params(b);  // validates ranges
    if (!(r.dt > 0.0) || !std::isfinite(r.dt)) throw DomainError("--dt must be > 0");
    if (!(r.horizon > 0.0) || !std::isfinite(r.horizon)) throw DomainError("--horizon must be > 0");
    if (r.paths < 1) throw DomainError("--paths must be >= 1");
    return r;
}

Json config_json(const Run& r) {
    Json c;
    c["command"] = r.command;
    c["preset"] = r.preset.empty() ? Json(nullptr) : Json(r.preset);
    c["model"] = std::string(to_string(r.model));
    c["q0"] = r.q0;
    c["d0"] = r.d0;
    c["b"] = r.b;
    c["sigma2"] = r.sigma2;
    c["dt"] = r.dt;
    c["horizon"] = r.horizon;
    const std::string& cmd = r.command;
    if (cmd == "simulate" || cmd == "cumulative" || cmd == "fpt" || cmd == "order-check") {
        c["scheme"] = std::string(to_string(r.scheme));
        c["paths"] = r.paths;
        c["seed"] = r.seed;
    }
    if (cmd == "fpt" || cmd == "durbin" || cmd == "order-check") c["x"] = r.x;
    if (cmd == "fpt" || cmd == "order-check") {
        c["bridge"] = r.bridge;
        c["method"] = r.method;
    }
    if (cmd == "durbin") c["form"] = r.form;
    if (cmd == "order-check") {
        c["alpha"] = r.alpha;
        c["permutations"] = r.permutations;
    }
    if (cmd == "moments") {
        c["at"] = r.at;
        c["s"] = r.s ? Json(*r.s) : Json(nullptr);
    }
    return c;
}

Json envelope(const Run& r) {
    Json j;
    j["tool"] = "arps-sde";
    j["version"] = kVersion;
    j["config"] = config_json(r);
    return j;
}

std::string shape_label(double b) { return "b" + io::format_double(b); }

struct Artifacts {
    Json json;
    std::optional<io::CsvTable> table;
    std::optional<io::SvgPlot> plot;
};

std::ofstream open_output(const std::string& path) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot open '" + path + "' for writing");
    return os;
}

void finish(std::ofstream& os, const std::string& path) {
    os.flush();
    if (!os) throw IoError("failed writing '" + path + "'");
}

void write_file(const std::string& path, const std::string& text) {
    auto os = open_output(path);
    os << text;
    finish(os, path);
}

struct Destinations {
    std::string csv, json, svg;
};

void emit(const Run& run, Artifacts& a, const Destinations& dst, std::ostream& out) {
    const std::string echo = config_json(run).dump();
    if (a.table) a.table->comments = {"arps-sde " + std::string(kVersion) + " config " + echo};
    if (a.plot) a.plot->description = "arps-sde " + std::string(kVersion) + " config " + echo;
    const std::string json_text = a.json.dump(2) + "\n";
    if (!dst.csv.empty()) {
        if (!a.table) throw UsageError("this command has no CSV output");
        auto os = open_output(dst.csv);
        io::write_csv(os, *a.table);
        finish(os, dst.csv);
    }
    if (!dst.svg.empty()) {
        if (!a.plot) throw UsageError("this command has no SVG output");
        write_file(dst.svg, io::render_svg(*a.plot));
    }
    if (!dst.json.empty()) write_file(dst.json, json_text);
    if (dst.csv.empty() && dst.json.empty() && dst.svg.empty()) out << json_text;
}

Artifacts start(const Run& run) {
    Artifacts a;
    a.json = envelope(run);
    return a;
}

io::SvgPlot make_plot(std::string title, std::string x_label, std::string y_label) {
    io::SvgPlot plot;
    plot.title = std::move(title);
    plot.x_label = std::move(x_label);
    plot.y_label = std::move(y_label);
    return plot;
}

io::SvgSeries series_of(const std::string& label, std::span<const double> x, std::span<const double> y) {
    return {label, {x.begin(), x.end()}, {y.begin(), y.end()}};
}

// simulate / cumulative ------------------------------------------------------

Artifacts paths_artifacts(const Run& run, bool cumulative) {
    const auto grid = TimeGrid::uniform(run.dt, run.horizon);
    Artifacts a = start(run);
    io::CsvTable table;
    table.header.push_back("t");
    table.columns.emplace_back(grid.points().begin(), grid.points().end());
    io::SvgPlot plot;
    plot.title = std::string(cumulative ? "Cumulative production, " : "Production rate, ") +
                 std::string(to_string(run.model)) + " model";
    plot.x_label = "t";
    plot.y_label = cumulative ? "cumulative Q" : "Q";
    Json results = Json::array();
    const bool multi = run.b.size() > 1;
    for (double shape : run.b) {
        const auto p = run.params(shape);
        auto ens = simulate_ensemble(p, run.model, run.scheme, grid, run.paths, run.seed, run.workers);
        std::size_t nonpositive = 0;
        for (const auto& path : ens.paths) nonpositive += path.nonpositive_steps;
        const double t_end = grid.horizon();
        Json r;
        r["b"] = shape;
        const auto moments = run.model == ModelKind::ConstantVol ? model1_moments(p, t_end, t_end) : model2_moments(p, t_end);
        r["final"] = Json{{"t", t_end},
                          {"ensemble_mean", ens.mean.back()},
                          {"ensemble_variance", ens.variance.back()},
                          {"closed_form", io::to_json(moments)}};
        if (run.model == ModelKind::LinearVol) r["nonpositive_steps"] = nonpositive;
        if (cumulative) {
            std::vector<double> finals;
            for (const auto& path : ens.paths) finals.push_back(cumulative_path(path).values.back());
            r["final"]["cumulative_mean"] = sample_mean(finals);
            r["final"]["arps_cumulative"] = arps_cumulative(p, t_end);
        }
        results.push_back(r);
        for (std::size_t k = 0; k < ens.paths.size(); ++k) {
            std::string name = multi ? shape_label(shape) : "path" + std::to_string(k);
            if (multi && run.paths > 1) name += "_path" + std::to_string(k);
            const Path shown = cumulative ? cumulative_path(ens.paths[k]) : ens.paths[k];
            table.header.push_back(name);
            table.columns.push_back(shown.values);
            plot.series.push_back(series_of(multi ? "b = " + io::format_double(shape) + (run.paths > 1 ? " #" + std::to_string(k) : "")
                                                  : "path " + std::to_string(k),
                                            grid.points(), shown.values));
        }
    }
    a.json["results"] = results;
    a.table = std::move(table);
    a.plot = std::move(plot);
    return a;
}

// moments --------------------------------------------------------------------

Json moments_at(const Run& run, const ArpsParams& p, double t) {
    Json j{{"t", t}};
    if (run.model == ModelKind::ConstantVol) {
        j["moments"] = io::to_json(model1_moments(p, run.s.value_or(t), t));
        j["tau"] = time_change_tau(p, t);
    } else {
        j["moments"] = io::to_json(model2_moments(p, t));
    }
    return j;
}

Artifacts moments_artifacts(const Run& run) {
    const auto grid = TimeGrid::uniform(run.dt, run.horizon);
    Artifacts a = start(run);
    io::CsvTable table;
    table.header.push_back("t");
    table.columns.emplace_back(grid.points().begin(), grid.points().end());
    io::SvgPlot plot = make_plot("Mean and one-standard-deviation band", "t", "Q");
    const std::vector<double> times = run.at.empty() ? std::vector<double>{run.horizon} : run.at;
    Json results = Json::array();
    for (double shape : run.b) {
        const auto p = run.params(shape);
        Json r{{"b", shape}, {"points", Json::array()}};
        for (double t : times) r["points"].push_back(moments_at(run, p, t));
        results.push_back(r);
        std::vector<double> mean, var, lo, hi;
        for (double t : grid.points()) {
            const auto m = run.model == ModelKind::ConstantVol ? model1_moments(p, t, t) : model2_moments(p, t);
            mean.push_back(m.mean);
            var.push_back(m.variance);
            lo.push_back(m.mean - std::sqrt(m.variance));
            hi.push_back(m.mean + std::sqrt(m.variance));
        }
        const std::string tag = run.b.size() > 1 ? "_" + shape_label(shape) : "";
        table.header.push_back("mean" + tag);
        table.columns.push_back(mean);
        table.header.push_back("variance" + tag);
        table.columns.push_back(var);
        const std::string label = "b = " + io::format_double(shape);
        plot.series.push_back(series_of("mean, " + label, grid.points(), mean));
        plot.series.push_back(series_of("mean - sd, " + label, grid.points(), lo));
        plot.series.push_back(series_of("mean + sd, " + label, grid.points(), hi));
    }
    a.json["results"] = results;
    a.table = std::move(table);
    a.plot = std::move(plot);
    return a;
}

// fpt ------------------------------------------------------------------------

FptConfig fpt_config(const Run& run, std::uint64_t seed) {
    FptConfig c;
    c.x = run.x;
    c.horizon = run.horizon;
    c.dt = run.dt;
    c.n_paths = run.paths;
    c.seed = seed;
    c.bridge = run.bridge;
    c.scheme = run.scheme;
    c.workers = run.workers;
    return c;
}

FptEstimate estimate_fpt(const Run& run, const ArpsParams& p, std::uint64_t seed) {
    if (run.method == "mc") return fpt_mc(p, run.model, fpt_config(run, seed));
    if (run.method == "time-change") {
        if (run.model != ModelKind::ConstantVol) throw DomainError("the time-change estimator applies to const-vol only");
        return fpt_time_change_model1(p, fpt_config(run, seed));
    }
    throw UsageError("unknown --method '" + run.method + "' (expected mc or time-change)");
}

Artifacts fpt_artifacts(const Run& run) {
    if (run.b.size() != 1) throw UsageError("fpt takes a single --b value");
    const auto p = run.params(run.b.front());
    const auto est = estimate_fpt(run, p, run.seed);
    Artifacts a = start(run);
    a.json["estimate"] = io::to_json(est, run.samples);

    std::optional<InverseGaussian> ig;
    if (run.model == ModelKind::LinearVol && p.exponential() && p.sigma() > 0.0 && run.x < run.q0) {
        ig.emplace(fpt_ig_model2_b0(p, run.x));
        Json cf = io::to_json(ig->params());
        cf["mean_z_score"] = (est.mean - ig->mean()) / est.mean_std_error;
        cf["ks_statistic"] = ks_statistic(est.samples, [&](double t) { return ig->cdf(t); });
        cf["ks_critical_value_1pct"] = ks_critical_value(est.samples.size(), 0.01);
        a.json["closed_form"] = cf;
    }
    if (run.model == ModelKind::ConstantVol && p.exponential() && p.sigma() > 0.0 && run.x < run.q0)
        a.json["ou_mean"] = ou_fpt_mean(p, run.x);
    if (run.x < run.q0) a.json["bounds"] = io::to_json(mean_fpt_bounds(p, run.x, run.model));

    a.table = io::samples_table(est);
    io::SvgPlot plot = make_plot("Empirical survival of the first-passage time", "t", "P[T > t]");
    std::vector<double> ts, surv, exact;
    const std::size_t n = 400;
    for (std::size_t i = 0; i <= n; ++i) {
        const double t = run.horizon * static_cast<double>(i) / n;
        ts.push_back(t);
        surv.push_back(est.survival(t));
        if (ig) exact.push_back(1.0 - ig->cdf(t));
    }
    plot.series.push_back(series_of("Monte Carlo", ts, surv));
    if (ig) plot.series.push_back(series_of("inverse Gaussian", ts, exact));
    a.plot = std::move(plot);
    return a;
}

// durbin ---------------------------------------------------------------------

Artifacts durbin_artifacts(const Run& run) {
    if (run.model != ModelKind::LinearVol) throw DomainError("durbin applies to the linear-vol model");
    std::vector<DurbinForm> forms;
    if (run.form == "both")
        forms = {DurbinForm::Corrected, DurbinForm::AsPrinted};
    else
        forms = {parse_durbin_form(run.form)};
    const auto grid = TimeGrid::uniform(run.dt, run.horizon);
    Artifacts a = start(run);
    io::CsvTable table;
    table.header.push_back("t");
    table.columns.emplace_back(grid.points().begin(), grid.points().end());
    io::SvgPlot plot = make_plot("Tangent approximation of the first-passage density", "t", "density");
    Json curves = Json::array();
    for (double shape : run.b) {
        const auto p = run.params(shape);
        for (DurbinForm form : forms) {
            const auto curve = durbin_density(p, run.x, grid, form);
            Json c{{"b", shape}};
            const Json full = io::to_json(curve);
            for (const auto& [k, v] : full.items()) c[k] = v;
            if (p.exponential()) {
                const InverseGaussian ig(fpt_ig_model2_b0(p, run.x));
                double worst = 0.0;
                for (std::size_t i = 1; i < grid.size(); ++i) {
                    const double ref = ig.pdf(grid[i]);
                    if (ref > 0.0) worst = std::max(worst, std::abs(curve.values[i] - ref) / ref);
                }
                c["inverse_gaussian_max_rel_diff"] = worst;
            }
            curves.push_back(c);
            std::string name = run.b.size() > 1 ? shape_label(shape) : "density";
            if (forms.size() > 1 || form == DurbinForm::AsPrinted) name += "_" + std::string(to_string(form));
            table.header.push_back(name);
            table.columns.push_back(curve.values);
            std::string label = "b = " + io::format_double(shape);
            if (forms.size() > 1) label += " (" + std::string(to_string(form)) + ")";
            plot.series.push_back(series_of(label, grid.points(), curve.values));
        }
    }
    a.json["curves"] = curves;
    a.table = std::move(table);
    a.plot = std::move(plot);
    return a;
}

// order-check ----------------------------------------------------------------

Artifacts order_artifacts(const Run& run) {
    if (run.b.size() < 2) throw UsageError("order-check needs at least two --b values");
    if (!std::is_sorted(run.b.begin(), run.b.end())) throw UsageError("order-check expects --b in increasing order");
    std::vector<FptEstimate> groups;
    for (std::size_t i = 0; i < run.b.size(); ++i)
        groups.push_back(estimate_fpt(run, run.params(run.b[i]), run.seed + i));
    Artifacts a = start(run);
    Json summary = Json::array();
    for (const auto& g : groups)
        summary.push_back(Json{{"b", g.params.b()},
                               {"mean", g.mean},
                               {"mean_std_error", g.mean_std_error},
                               {"n_censored", g.n_censored}});
    a.json["groups"] = summary;
    Json pairs = Json::array();
    bool all = true;
    for (std::size_t i = 0; i + 1 < groups.size(); ++i) {
        OrderCheckOptions opts{run.permutations, run.seed + 1000 + i};
        const auto report = stochastic_order_check(groups[i].samples, groups[i + 1].samples, run.alpha, opts);
        Json r{{"b_low", run.b[i]}, {"b_high", run.b[i + 1]}};
        const Json detail = io::to_json(report);
        for (const auto& [k, v] : detail.items()) r[k] = v;
        all = all && report.dominance_accepted && report.means_ordered;
        pairs.push_back(r);
    }
    a.json["pairs"] = pairs;
    a.json["ordering_holds"] = all;

    io::CsvTable table;
    io::SvgPlot plot = make_plot("Empirical survival functions of the first-passage time", "t", "P[T > t]");
    std::vector<double> ts;
    const std::size_t n = 500;
    for (std::size_t i = 0; i <= n; ++i) ts.push_back(run.horizon * static_cast<double>(i) / n);
    table.header.push_back("t");
    table.columns.push_back(ts);
    for (const auto& g : groups) {
        std::vector<double> surv;
        for (double t : ts) surv.push_back(g.survival(t));
        table.header.push_back("survival_" + shape_label(g.params.b()));
        table.columns.push_back(surv);
        plot.series.push_back(series_of("b = " + io::format_double(g.params.b()), ts, surv));
    }
    a.table = std::move(table);
    a.plot = std::move(plot);
    return a;
}

// figures --------------------------------------------------------------------

Artifacts build(const Run& run) {
    if (run.command == "simulate") return paths_artifacts(run, false);
    if (run.command == "cumulative") return paths_artifacts(run, true);
    if (run.command == "moments") return moments_artifacts(run);
    if (run.command == "fpt") return fpt_artifacts(run);
    if (run.command == "durbin") return durbin_artifacts(run);
    if (run.command == "order-check") return order_artifacts(run);
    throw UsageError("unknown command '" + run.command + "'");
}

void figures(const Flags& f, std::ostream& out) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(f.out_dir, ec);
    if (ec || !fs::is_directory(f.out_dir)) throw IoError("cannot create directory '" + f.out_dir + "'");
    const std::vector<std::pair<std::string, std::string>> jobs{
        {"fig1", "simulate"}, {"fig2", "simulate"}, {"fig3", "durbin"}, {"fig4a", "cumulative"}, {"fig4b", "cumulative"}};
    for (const auto& [name, command] : jobs) {
        Flags g;
        g.preset = name;
        g.seed = f.seed;
        g.workers = f.workers;
        const Run run = resolve(command, g);
        Artifacts a = build(run);
        const std::string base = (fs::path(f.out_dir) / name).string();
        emit(run, a, {base + ".csv", base + ".json", base + ".svg"}, out);
        out << base << ".csv\n" << base << ".json\n" << base << ".svg\n";
    }
}

void add_model_options(CLI::App* sub, Flags& f) {
    sub->add_option("--preset", f.preset, "Parameter preset: fig1, fig2, fig3, fig4a, fig4b");
    sub->add_option("--model", f.model, "const-vol or linear-vol");
    sub->add_option("--q0", f.q0, "Initial rate q0 > 0");
    sub->add_option("--d0", f.d0, "Initial decline rate d0 > 0");
    sub->add_option("--b", f.b, "Shape parameter(s) in [0, 1]")->delimiter(',');
    sub->add_option("--sigma2", f.sigma2, "Squared volatility");
    sub->add_option("--dt", f.dt, "Time step");
    sub->add_option("--horizon", f.horizon, "Final time");
}

void add_output_options(CLI::App* sub, Flags& f) {
    sub->add_option("--out", f.out, "CSV output path");
    sub->add_option("--json", f.json, "JSON output path (stdout when no output is given)");
    sub->add_option("--svg", f.svg, "SVG plot output path");
}

void add_mc_options(CLI::App* sub, Flags& f) {
    sub->add_option("--scheme", f.scheme, "em or exact");
    sub->add_option("--paths", f.paths, "Number of paths");
    sub->add_option("--seed", f.seed, "Random seed");
    sub->add_option("--workers", f.workers, "Worker threads (0 = hardware concurrency)");
}

void add_fpt_options(CLI::App* sub, Flags& f) {
    sub->add_option("--x", f.x, "Level to reach from above");
    sub->add_flag("--bridge,!--no-bridge", f.bridge, "Brownian-bridge crossing correction (default on)");
    sub->add_option("--method", f.method, "mc or time-change (const-vol; --dt is then the tau-clock step)");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Stochastic Arps decline models: simulation, moments and first-passage times", "arps-sde"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);
    Flags f;

    auto* simulate = app.add_subcommand("simulate", "Simulate sample paths");
    add_model_options(simulate, f);
    add_mc_options(simulate, f);
    add_output_options(simulate, f);

    auto* cumulative = app.add_subcommand("cumulative", "Simulate cumulative production paths");
    add_model_options(cumulative, f);
    add_mc_options(cumulative, f);
    add_output_options(cumulative, f);

    auto* moments = app.add_subcommand("moments", "Closed-form mean, variance and covariance");
    add_model_options(moments, f);
    moments->add_option("--at", f.at, "Times for the JSON report (default: horizon)")->delimiter(',');
    moments->add_option("--s", f.s, "Second time for the covariance Cov(Q_s, Q_t)");
    add_output_options(moments, f);

    auto* fpt = app.add_subcommand("fpt", "Monte Carlo first-passage time below --x");
    add_model_options(fpt, f);
    add_mc_options(fpt, f);
    add_fpt_options(fpt, f);
    fpt->add_flag("--samples", f.samples, "Include the samples in the JSON output");
    add_output_options(fpt, f);

    auto* durbin = app.add_subcommand("durbin", "Tangent approximation of the linear-vol first-passage density");
    add_model_options(durbin, f);
    durbin->add_option("--x", f.x, "Level to reach from above");
    durbin->add_option("--form", f.form, "corrected, as_printed or both");
    add_output_options(durbin, f);

    auto* order = app.add_subcommand("order-check", "Check first-passage times are stochastically increasing in b");
    add_model_options(order, f);
    add_mc_options(order, f);
    add_fpt_options(order, f);
    order->add_option("--alpha", f.alpha, "Test level");
    order->add_option("--permutations", f.permutations, "Permutation count for the critical value");
    add_output_options(order, f);

    auto* figs = app.add_subcommand("figures", "Regenerate all figure data (CSV, JSON, SVG)");
    figs->add_option("--out-dir", f.out_dir, "Output directory");
    figs->add_option("--seed", f.seed, "Random seed");
    figs->add_option("--workers", f.workers, "Worker threads (0 = hardware concurrency)");

    std::vector<const char*> argv{"arps-sde"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        auto* chosen = app.get_subcommands().front();
        if (chosen == figs) {
            figures(f, out);
            return kOk;
        }
        const Run r = resolve(chosen->get_name(), f);
        Artifacts a = build(r);
        emit(r, a, {f.out, f.json, f.svg}, out);
        return kOk;
    } catch (const UsageError& e) {
        err << "arps-sde: " << e.what() << '\n';
        return kUsage;
    } catch (const DomainError& e) {
        err << "arps-sde: " << e.what() << '\n';
        return kDomain;
    } catch (const IoError& e) {
        err << "arps-sde: " << e.what() << '\n';
        return kIo;
    } catch (const NumericalError& e) {
        err << "arps-sde: numerical failure: " << e.what() << '\n';
        return kNumerical;
    } catch (const std::exception& e) {
        err << "arps-sde: " << e.what() << '\n';
        return kNumerical;
    }
}

}  // namespace arps::cli
