#include "doblab/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "doblab/error.hpp"

namespace doblab {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 450.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 170.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;
constexpr std::size_t kMaxPoints = 4000;

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};

std::string num(double v, int prec = 2) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", prec, v);
    std::string s = buf;
    if (s == "-0.00" || s == "-0.0" || s == "-0") s.erase(0, 1);
    return s;
}

std::string tick_label(double v) {
    if (v == 0.0) return "0";
    char buf[64];
    const double a = std::abs(v);
    if (a >= 1e-3 && a < 1e5)
        std::snprintf(buf, sizeof buf, "%g", v);
    else
        std::snprintf(buf, sizeof buf, "%.0e", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

[[noreturn]] void fail(const std::string& msg) { throw NumericError(NumericFault::plotting, "plot: " + msg); }

// Keeps the first, last, and per-bucket min/max samples so long records stay plottable.
std::vector<std::size_t> decimate(const std::vector<double>& y) {
    std::vector<std::size_t> keep;
    const std::size_t n = y.size();
    if (n <= kMaxPoints) {
        keep.resize(n);
        for (std::size_t i = 0; i < n; ++i) keep[i] = i;
        return keep;
    }
    const std::size_t buckets = kMaxPoints / 2;
    for (std::size_t b = 0; b < buckets; ++b) {
        const std::size_t lo = b * n / buckets, hi = (b + 1) * n / buckets;
        std::size_t imin = lo, imax = lo;
        for (std::size_t i = lo; i < hi; ++i) {
            if (y[i] < y[imin]) imin = i;
            if (y[i] > y[imax]) imax = i;
        }
        keep.push_back(std::min(imin, imax));
        if (imin != imax) keep.push_back(std::max(imin, imax));
    }
    if (keep.front() != 0) keep.insert(keep.begin(), 0);
    if (keep.back() != n - 1) keep.push_back(n - 1);
    return keep;
}

std::pair<double, double> padded(double lo, double hi, bool log_scale) {
    if (log_scale) {
        if (lo == hi) return {lo / 10.0, hi * 10.0};
        return {lo, hi};
    }
    if (lo == hi) {
        const double d = lo == 0.0 ? 1.0 : std::abs(lo) * 0.1;
        return {lo - d, hi + d};
    }
    const double d = 0.05 * (hi - lo);
    return {lo - d, hi + d};
}

}  // namespace

std::vector<double> axis_ticks(double lo, double hi, bool log_scale) {
    std::vector<double> ticks;
    if (!(hi > lo)) return ticks;
    if (log_scale) {
        const int e0 = static_cast<int>(std::ceil(std::log10(lo) - 1e-9));
        const int e1 = static_cast<int>(std::floor(std::log10(hi) + 1e-9));
        const int stride = std::max(1, (e1 - e0 + 1 + 7) / 8);
        for (int e = e0; e <= e1; e += stride) ticks.push_back(std::pow(10.0, e));
        return ticks;
    }
    const double raw = (hi - lo) / 6.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0})
        if (m * mag >= raw) {
            step = m * mag;
            break;
        }
    for (double t = std::ceil(lo / step) * step; t <= hi + 1e-9 * step; t += step)
        ticks.push_back(std::abs(t) < 1e-12 * step ? 0.0 : t);
    return ticks;
}

std::string emit_svg_plot(const std::vector<PlotSeries>& series, const AxesSpec& axes) {
    if (series.empty()) fail("no series");
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymin = xmin, ymax = -xmin;
    for (const auto& s : series) {
        if (s.x.empty()) fail("series '" + s.name + "' is empty");
        if (s.x.size() != s.y.size()) fail("series '" + s.name + "' has mismatched x/y lengths");
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) fail("series '" + s.name + "' has a non-finite value");
            if ((axes.log_x && s.x[i] <= 0.0) || (axes.log_y && s.y[i] <= 0.0))
                fail("series '" + s.name + "' has non-positive data on a log axis");
            xmin = std::min(xmin, s.x[i]);
            xmax = std::max(xmax, s.x[i]);
            ymin = std::min(ymin, s.y[i]);
            ymax = std::max(ymax, s.y[i]);
        }
    }
    auto [x0, x1] = axes.x_range ? *axes.x_range : padded(xmin, xmax, axes.log_x);
    auto [y0, y1] = axes.y_range ? *axes.y_range : padded(ymin, ymax, axes.log_y);
    if (!(x1 > x0) || !(y1 > y0) || (axes.log_x && x0 <= 0.0) || (axes.log_y && y0 <= 0.0)) fail("invalid axis range");

    const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
    const auto tx = [&](double x) {
        const double u = axes.log_x ? (std::log10(x) - std::log10(x0)) / (std::log10(x1) - std::log10(x0)) : (x - x0) / (x1 - x0);
        return kLeft + u * pw;
    };
    const auto ty = [&](double y) {
        const double u = axes.log_y ? (std::log10(y) - std::log10(y0)) / (std::log10(y1) - std::log10(y0)) : (y - y0) / (y1 - y0);
        return kTop + (1.0 - u) * ph;
    };

    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth, 0) + "\" height=\"" + num(kHeight, 0) +
           "\" viewBox=\"0 0 " + num(kWidth, 0) + " " + num(kHeight, 0) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    out += "<rect x=\"0\" y=\"0\" width=\"" + num(kWidth, 0) + "\" height=\"" + num(kHeight, 0) + "\" fill=\"white\"/>\n";
    out += "<defs><clipPath id=\"plot-area\"><rect x=\"" + num(kLeft) + "\" y=\"" + num(kTop) + "\" width=\"" + num(pw) +
           "\" height=\"" + num(ph) + "\"/></clipPath></defs>\n";
    if (!axes.title.empty())
        out += "<text x=\"" + num(kLeft + pw / 2) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" + escape(axes.title) + "</text>\n";

    out += "<g stroke=\"#dddddd\" stroke-width=\"1\">\n";
    const auto xt = axis_ticks(x0, x1, axes.log_x), yt = axis_ticks(y0, y1, axes.log_y);
    for (double t : xt) out += "<line x1=\"" + num(tx(t)) + "\" y1=\"" + num(kTop) + "\" x2=\"" + num(tx(t)) + "\" y2=\"" + num(kTop + ph) + "\"/>\n";
    for (double t : yt) out += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(ty(t)) + "\" x2=\"" + num(kLeft + pw) + "\" y2=\"" + num(ty(t)) + "\"/>\n";
    out += "</g>\n";
    out += "<rect x=\"" + num(kLeft) + "\" y=\"" + num(kTop) + "\" width=\"" + num(pw) + "\" height=\"" + num(ph) +
           "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
    out += "<g text-anchor=\"middle\">\n";
    for (double t : xt) out += "<text x=\"" + num(tx(t)) + "\" y=\"" + num(kTop + ph + 18) + "\">" + tick_label(t) + "</text>\n";
    out += "</g>\n<g text-anchor=\"end\">\n";
    for (double t : yt) out += "<text x=\"" + num(kLeft - 6) + "\" y=\"" + num(ty(t) + 4) + "\">" + tick_label(t) + "</text>\n";
    out += "</g>\n";
    if (!axes.x_label.empty())
        out += "<text x=\"" + num(kLeft + pw / 2) + "\" y=\"" + num(kHeight - 16) + "\" text-anchor=\"middle\">" + escape(axes.x_label) + "</text>\n";
    if (!axes.y_label.empty())
        out += "<text x=\"18\" y=\"" + num(kTop + ph / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " + num(kTop + ph / 2) +
               ")\">" + escape(axes.y_label) + "</text>\n";

    out += "<g clip-path=\"url(#plot-area)\">\n";
    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        const char* color = kPalette[k % std::size(kPalette)];
        if (s.style == PlotSeries::Style::line) {
            out += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"1.5\" points=\"";
            bool first = true;
            for (std::size_t i : decimate(s.y)) {
                if (!first) out += ' ';
                first = false;
                out += num(tx(s.x[i])) + "," + num(ty(s.y[i]));
            }
            out += "\"/>\n";
        } else {
            out += "<g fill=\"" + std::string(color) + "\">\n";
            for (std::size_t i = 0; i < s.x.size(); ++i)
                out += "<circle cx=\"" + num(tx(s.x[i])) + "\" cy=\"" + num(ty(s.y[i])) + "\" r=\"1.6\"/>\n";
            out += "</g>\n";
        }
    }
    out += "</g>\n";

    out += "<g font-size=\"11\">\n";
    for (std::size_t k = 0; k < series.size(); ++k) {
        const double ly = kTop + 14.0 + 18.0 * static_cast<double>(k);
        const double lx = kLeft + pw + 12.0;
        const char* color = kPalette[k % std::size(kPalette)];
        out += "<line x1=\"" + num(lx) + "\" y1=\"" + num(ly - 4) + "\" x2=\"" + num(lx + 20) + "\" y2=\"" + num(ly - 4) +
               "\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
        out += "<text x=\"" + num(lx + 26) + "\" y=\"" + num(ly) + "\">" + escape(series[k].name) + "</text>\n";
    }
    out += "</g>\n</svg>\n";
    return out;
}

}  // namespace doblab
