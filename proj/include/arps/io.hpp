#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "arps/decline.hpp"
#include "arps/fpt.hpp"
#include "arps/sim.hpp"

namespace arps::io {

using Json = nlohmann::ordered_json;

/// Shortest-round-trip decimal with at most 17 significant digits; "nan",
/// "inf", "-inf" for non-finite values.
std::string format_double(double v);

/// Column-major numeric table. CSV: optional "# " comment lines, header
/// row, comma separated, LF endings.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> columns;
    std::vector<std::string> comments;
};

void write_csv(std::ostream& os, const CsvTable& table);
CsvTable read_csv(std::istream& is);

Json to_json(const ArpsParams& p);
Json to_json(const MomentSummary& m);
Json to_json(const InverseGaussianParams& ig);
Json to_json(const FptConfig& c);
Json to_json(const FptEstimate& est, bool include_samples = false);
Json to_json(const DensityCurve& curve);
Json to_json(const MeanFptBounds& bounds);
Json to_json(const OrderReport& report);
/// Ensemble configuration and per-time summary (paths go to CSV).
Json to_json(const PathEnsemble& ens);

/// Tables for the common artifacts: t first, then one column per path or statistic.
CsvTable paths_table(std::span<const Path> paths, const std::vector<std::string>& names);
CsvTable density_table(const DensityCurve& curve);
CsvTable samples_table(const FptEstimate& est);

struct SvgSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

struct SvgPlot {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<SvgSeries> series;
    std::string description;  // emitted as <desc>
};

/// Self-contained static line plot: axes with ticks, one polyline per
/// series, legend.
std::string render_svg(const SvgPlot& plot);

}  // namespace arps::io
