#pragma once

#include <optional>
#include <string>
#include <vector>

namespace doblab {

struct PlotSeries {
    enum class Style { line, markers };
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
    Style style = Style::line;
};

struct AxesSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_x = false;
    bool log_y = false;
    /// Fixed ranges; data outside is clipped. Unset means fit to data.
    std::optional<std::pair<double, double>> x_range = std::nullopt;
    std::optional<std::pair<double, double>> y_range = std::nullopt;
};

/// Standalone SVG with frame, ticks, tick labels and a legend in series
/// order. Output depends only on the input. Throws NumericError(plotting) for
/// no series, an empty series, mismatched x/y lengths, non-finite values, or
/// non-positive data on a log axis.
std::string emit_svg_plot(const std::vector<PlotSeries>& series, const AxesSpec& axes);

/// Tick positions for [lo, hi]: 1-2-5 steps on linear axes, decades on log axes.
std::vector<double> axis_ticks(double lo, double hi, bool log_scale);

}  // namespace doblab
