#include "arps/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

namespace arps::io {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

namespace {

double parse_double(const std::string& cell) {
    if (cell == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (cell == "inf") return std::numeric_limits<double>::infinity();
    if (cell == "-inf") return -std::numeric_limits<double>::infinity();
    double v = 0.0;
    const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (res.ec != std::errc{} || res.ptr != cell.data() + cell.size())
        throw std::runtime_error("malformed CSV number '" + cell + "'");
    return v;
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json optional_number(const std::optional<double>& v) { return v ? number(*v) : Json(nullptr); }

}  // namespace

void write_csv(std::ostream& os, const CsvTable& table) {
    if (table.header.size() != table.columns.size()) throw std::logic_error("CSV header/column count mismatch");
    for (const auto& c : table.comments) {
        if (c.find('\n') != std::string::npos) throw std::logic_error("CSV comment spans lines");
        os << "# " << c << '\n';
    }
    for (std::size_t c = 0; c < table.header.size(); ++c) os << (c ? "," : "") << table.header[c];
    os << '\n';
    const std::size_t rows = table.columns.empty() ? 0 : table.columns.front().size();
    for (const auto& col : table.columns)
        if (col.size() != rows) throw std::logic_error("CSV columns of unequal length");
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < table.columns.size(); ++c) os << (c ? "," : "") << format_double(table.columns[c][r]);
        os << '\n';
    }
}

CsvTable read_csv(std::istream& is) {
    CsvTable table;
    std::string line;
    while (true) {
        if (!std::getline(is, line)) throw std::runtime_error("empty CSV");
        if (line.rfind("# ", 0) != 0) break;
        table.comments.push_back(line.substr(2));
    }
    table.header = split(line);
    table.columns.resize(table.header.size());
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto cells = split(line);
        if (cells.size() != table.header.size()) throw std::runtime_error("CSV row width mismatch");
        for (std::size_t c = 0; c < cells.size(); ++c) table.columns[c].push_back(parse_double(cells[c]));
    }
    return table;
}

Json to_json(const ArpsParams& p) {
    return Json{{"q0", p.q0()}, {"d0", p.d0()}, {"b", p.b()}, {"sigma", p.sigma()}, {"sigma2", p.sigma2()}};
}

Json to_json(const MomentSummary& m) {
    Json j{{"mean", number(m.mean)}, {"variance", number(m.variance)}};
    if (m.covariance) j["covariance"] = number(*m.covariance);
    if (m.lognormal_location) j["lognormal_location"] = number(*m.lognormal_location);
    if (m.lognormal_scale2) j["lognormal_scale2"] = number(*m.lognormal_scale2);
    return j;
}

Json to_json(const InverseGaussianParams& ig) {
    return Json{{"m", ig.m}, {"lambda", ig.lambda}, {"mean", ig.m}, {"variance", ig.m * ig.m * ig.m / ig.lambda}};
}

Json to_json(const FptConfig& c) {
    return Json{{"x", c.x},           {"horizon", c.horizon}, {"dt", c.dt},
                {"n_paths", c.n_paths}, {"seed", c.seed},       {"bridge", c.bridge},
                {"scheme", std::string(to_string(c.scheme))}};
}

Json to_json(const FptEstimate& est, bool include_samples) {
    Json j;
    j["method"] = est.method;
    j["model"] = std::string(to_string(est.model));
    j["params"] = to_json(est.params);
    j["config"] = to_json(est.config);
    j["n_paths"] = est.samples.size();
    j["n_censored"] = est.n_censored;
    j["censored_fraction"] = est.censored_fraction;
    j["mean"] = number(est.mean);
    j["mean_std_error"] = number(est.mean_std_error);
    j["variance"] = number(est.variance);
    Json qs = Json::array();
    for (const auto& q : est.quantiles)
        qs.push_back(Json{{"p", q.p}, {"value", number(q.value)}, {"std_error", number(q.std_error)},
                          {"lower_bound", q.lower_bound}});
    j["quantiles"] = std::move(qs);
    if (include_samples) {
        j["samples"] = est.samples;
        j["censored"] = est.censored;
    }
    return j;
}

Json to_json(const DensityCurve& curve) {
    return Json{{"form", std::string(to_string(curve.form))},
                {"points", curve.grid.size()},
                {"clamp_count", curve.clamp_count},
                {"normalization_defect", number(curve.normalization_defect)}};
}

Json to_json(const MeanFptBounds& b) {
    Json j{{"model", std::string(to_string(b.model))}};
    if (b.model == ModelKind::LinearVol) {
        j["lower_bound"] = optional_number(b.lower_bound);
    } else {
        j["log_phi_x"] = optional_number(b.log_phi_x);
        j["log_phi_q0"] = optional_number(b.log_phi_q0);
        j["as_printed"] = optional_number(b.as_printed);
        j["magnitude"] = optional_number(b.magnitude);
    }
    j["note"] = b.note;
    return j;
}

Json to_json(const OrderReport& r) {
    return Json{{"max_violation", number(r.max_violation)},
                {"critical_value", number(r.critical_value)},
                {"p_value", number(r.p_value)},
                {"alpha", r.alpha},
                {"dominance_accepted", r.dominance_accepted},
                {"mean_a", number(r.mean_a)},
                {"mean_b", number(r.mean_b)},
                {"se_a", number(r.se_a)},
                {"se_b", number(r.se_b)},
                {"means_ordered", r.means_ordered},
                {"permutations", r.permutations}};
}

Json to_json(const PathEnsemble& ens) {
    Json j;
    j["model"] = std::string(to_string(ens.model));
    j["scheme"] = std::string(to_string(ens.scheme));
    j["params"] = to_json(ens.params);
    j["seed"] = ens.seed;
    j["n_paths"] = ens.paths.size();
    std::size_t nonpositive = 0;
    for (const auto& p : ens.paths) nonpositive += p.nonpositive_steps;
    j["nonpositive_steps"] = nonpositive;
    Json t = Json::array(), mean = Json::array(), var = Json::array();
    for (std::size_t i = 0; i < ens.grid.size(); ++i) {
        t.push_back(ens.grid[i]);
        mean.push_back(number(ens.mean[i]));
        var.push_back(number(ens.variance[i]));
    }
    j["summary"] = Json{{"t", std::move(t)}, {"mean", std::move(mean)}, {"variance", std::move(var)}};
    return j;
}

CsvTable paths_table(std::span<const Path> paths, const std::vector<std::string>& names) {
    if (paths.empty() || names.size() != paths.size()) throw std::logic_error("paths_table needs one name per path");
    CsvTable t;
    t.header.push_back("t");
    t.columns.emplace_back(paths.front().grid.points().begin(), paths.front().grid.points().end());
    for (std::size_t k = 0; k < paths.size(); ++k) {
        t.header.push_back(names[k]);
        t.columns.push_back(paths[k].values);
    }
    return t;
}

CsvTable density_table(const DensityCurve& curve) {
    CsvTable t;
    t.header = {"t", "density"};
    t.columns.emplace_back(curve.grid.points().begin(), curve.grid.points().end());
    t.columns.push_back(curve.values);
    return t;
}

CsvTable samples_table(const FptEstimate& est) {
    CsvTable t;
    t.header = {"t", "censored"};
    t.columns.push_back(est.samples);
    t.columns.emplace_back(est.censored.begin(), est.censored.end());
    return t;
}

namespace {

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string fixed(double v, int digits = 2) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(digits);
    os << v;
    return os.str();
}

std::string tick_label(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

// 1, 2 or 5 times a power of ten, giving about `target` ticks over the span.
double nice_step(double span, int target) {
    const double raw = span / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double f = raw / mag;
    return (f < 1.5 ? 1.0 : f < 3.5 ? 2.0 : f < 7.5 ? 5.0 : 10.0) * mag;
}

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

}  // namespace

std::string render_svg(const SvgPlot& plot) {
    constexpr double width = 800, height = 500, left = 80, right = 180, top = 50, bottom = 60;
    const double pw = width - left - right, ph = height - top - bottom;

    double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
    for (const auto& s : plot.series)
        for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            xmin = std::min(xmin, s.x[i]);
            xmax = std::max(xmax, s.x[i]);
            ymin = std::min(ymin, s.y[i]);
            ymax = std::max(ymax, s.y[i]);
        }
    if (!(xmin <= xmax)) xmin = 0, xmax = 1;
    if (!(ymin <= ymax)) ymin = 0, ymax = 1;
    if (xmax == xmin) xmax = xmin + 1;
    if (ymax == ymin) ymax = ymin + 1;
    const double ypad = 0.05 * (ymax - ymin);
    ymin -= ypad;
    ymax += ypad;

    const auto sx = [&](double x) { return left + (x - xmin) / (xmax - xmin) * pw; };
    const auto sy = [&](double y) { return top + (ymax - y) / (ymax - ymin) * ph; };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
       << "\" viewBox=\"0 0 " << width << ' ' << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    if (!plot.description.empty()) os << "<desc>" << escape(plot.description) << "</desc>\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << left + pw / 2 << "\" y=\"28\" text-anchor=\"middle\" font-size=\"16\">" << escape(plot.title)
       << "</text>\n";
    os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
       << "\" fill=\"none\" stroke=\"black\"/>\n";

    const double xs = nice_step(xmax - xmin, 8), ys = nice_step(ymax - ymin, 6);
    for (long k = std::lround(std::ceil(xmin / xs)); k * xs <= xmax + 1e-9 * xs; ++k) {
        const double v = static_cast<double>(k) * xs;
        os << "<line x1=\"" << fixed(sx(v)) << "\" y1=\"" << top + ph << "\" x2=\"" << fixed(sx(v)) << "\" y2=\""
           << top + ph + 5 << "\" stroke=\"black\"/>";
        os << "<text x=\"" << fixed(sx(v)) << "\" y=\"" << top + ph + 20 << "\" text-anchor=\"middle\">"
           << tick_label(v) << "</text>\n";
    }
    for (long k = std::lround(std::ceil(ymin / ys)); k * ys <= ymax + 1e-9 * ys; ++k) {
        const double v = static_cast<double>(k) * ys;
        os << "<line x1=\"" << left - 5 << "\" y1=\"" << fixed(sy(v)) << "\" x2=\"" << left << "\" y2=\""
           << fixed(sy(v)) << "\" stroke=\"black\"/>";
        os << "<text x=\"" << left - 8 << "\" y=\"" << fixed(sy(v) + 4) << "\" text-anchor=\"end\">" << tick_label(v)
           << "</text>\n";
    }
    os << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 15 << "\" text-anchor=\"middle\">"
       << escape(plot.x_label) << "</text>\n";
    os << "<text transform=\"translate(18," << top + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
       << escape(plot.y_label) << "</text>\n";

    for (std::size_t k = 0; k < plot.series.size(); ++k) {
        const auto& s = plot.series[k];
        const char* color = kPalette[k % std::size(kPalette)];
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1\" points=\"";
        // Thin very long series to at most ~2000 vertices.
        const std::size_t n = std::min(s.x.size(), s.y.size());
        const std::size_t stride = std::max<std::size_t>(1, n / 2000);
        for (std::size_t i = 0; i < n; i += stride) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            os << fixed(sx(s.x[i])) << ',' << fixed(sy(s.y[i])) << ' ';
        }
        os << "\"/>\n";
        const double ly = top + 10 + 18.0 * k;
        os << "<line x1=\"" << left + pw + 15 << "\" y1=\"" << ly << "\" x2=\"" << left + pw + 40 << "\" y2=\"" << ly
           << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>";
        os << "<text x=\"" << left + pw + 46 << "\" y=\"" << ly + 4 << "\">" << escape(s.label) << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace arps::io
