#include "spinsqueeze/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace sqz {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (const char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out += c;
        }
    }
    return out;
}

// "Nice" tick positions covering [lo, hi].
std::vector<double> linear_ticks(double lo, double hi) {
    const double span = hi - lo;
    const double raw = span / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (const double m : {1.0, 2.0, 5.0, 10.0})
        if (raw <= m * mag) {
            step = m * mag;
            break;
        }
    std::vector<double> ticks;
    for (double t = std::ceil(lo / step) * step; t <= hi + 1e-9 * span; t += step)
        ticks.push_back(std::abs(t) < 1e-12 * span ? 0.0 : t);
    return ticks;
}

std::vector<double> decade_ticks(double lo, double hi) {
    std::vector<double> ticks;
    for (int e = static_cast<int>(std::floor(lo)); e <= static_cast<int>(std::ceil(hi)); ++e)
        if (e >= lo - 1e-9 && e <= hi + 1e-9) ticks.push_back(static_cast<double>(e));
    if (ticks.size() < 2) return linear_ticks(lo, hi);
    return ticks;
}

} // namespace

std::string render_line_plot(const std::vector<SvgSeries>& series,
                             const SvgPlotOptions& options) {
    const double left = 70.0, right = 20.0, top = options.title.empty() ? 16.0 : 36.0,
                 bottom = 52.0;
    const double w = options.width, h = options.height;
    const double plot_w = w - left - right;
    const double plot_h = h - top - bottom;
    if (plot_w < 50 || plot_h < 50) throw std::invalid_argument("svg canvas too small");

    // Gather bounds in plot coordinates (log-y works on log10 values).
    double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
    double y_lo = x_lo, y_hi = -x_lo;
    auto usable = [&](double x, double y) {
        return std::isfinite(x) && std::isfinite(y) && (!options.log_y || y > 0.0);
    };
    for (const auto& s : series) {
        const std::size_t n = std::min(s.x.size(), s.y.size());
        for (std::size_t i = 0; i < n; ++i) {
            if (!usable(s.x[i], s.y[i])) continue;
            const double yy = options.log_y ? std::log10(s.y[i]) : s.y[i];
            x_lo = std::min(x_lo, s.x[i]);
            x_hi = std::max(x_hi, s.x[i]);
            y_lo = std::min(y_lo, yy);
            y_hi = std::max(y_hi, yy);
        }
    }
    if (!std::isfinite(x_lo) || !std::isfinite(y_lo))
        throw std::invalid_argument("no plottable samples");
    if (x_hi <= x_lo) x_hi = x_lo + 1.0;
    if (y_hi <= y_lo) {
        y_lo -= 0.5;
        y_hi += 0.5;
    }
    const double y_pad = 0.05 * (y_hi - y_lo);
    y_lo -= y_pad;
    y_hi += y_pad;

    auto px = [&](double x) { return left + (x - x_lo) / (x_hi - x_lo) * plot_w; };
    auto py = [&](double y) {
        const double yy = options.log_y ? std::log10(y) : y;
        return top + (1.0 - (yy - y_lo) / (y_hi - y_lo)) * plot_h;
    };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << options.width
        << "\" height=\"" << options.height << "\" viewBox=\"0 0 " << options.width << ' '
        << options.height << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<g font-family=\"sans-serif\" font-size=\"12\" fill=\"#303030\">\n";

    if (!options.title.empty())
        svg << "<text x=\"" << w / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"15\">"
            << escape(options.title) << "</text>\n";

    // Frame.
    svg << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << plot_w << "\" height=\""
        << plot_h << "\" fill=\"none\" stroke=\"#303030\"/>\n";

    for (const double t : linear_ticks(x_lo, x_hi)) {
        const double x = px(t);
        svg << "<line x1=\"" << x << "\" y1=\"" << top + plot_h << "\" x2=\"" << x << "\" y2=\""
            << top + plot_h + 5 << "\" stroke=\"#303030\"/>\n";
        svg << "<line x1=\"" << x << "\" y1=\"" << top << "\" x2=\"" << x << "\" y2=\""
            << top + plot_h << "\" stroke=\"#e0e0e0\"/>\n";
        svg << "<text x=\"" << x << "\" y=\"" << top + plot_h + 18
            << "\" text-anchor=\"middle\">" << fmt(t) << "</text>\n";
    }
    const auto y_ticks = options.log_y ? decade_ticks(y_lo, y_hi) : linear_ticks(y_lo, y_hi);
    for (const double t : y_ticks) {
        const double y = top + (1.0 - (t - y_lo) / (y_hi - y_lo)) * plot_h;
        svg << "<line x1=\"" << left - 5 << "\" y1=\"" << y << "\" x2=\"" << left << "\" y2=\""
            << y << "\" stroke=\"#303030\"/>\n";
        svg << "<line x1=\"" << left << "\" y1=\"" << y << "\" x2=\"" << left + plot_w
            << "\" y2=\"" << y << "\" stroke=\"#e0e0e0\"/>\n";
        svg << "<text x=\"" << left - 8 << "\" y=\"" << y + 4 << "\" text-anchor=\"end\">"
            << (options.log_y ? "1e" + fmt(t) : fmt(t)) << "</text>\n";
    }

    if (!options.x_label.empty())
        svg << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << h - 10
            << "\" text-anchor=\"middle\">" << escape(options.x_label) << "</text>\n";
    if (!options.y_label.empty())
        svg << "<text x=\"16\" y=\"" << top + plot_h / 2
            << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " << top + plot_h / 2
            << ")\">" << escape(options.y_label) << "</text>\n";

    int color_idx = 0;
    double legend_y = top + 16;
    for (const auto& s : series) {
        const std::string color =
            s.color.empty() ? kPalette[color_idx++ % std::size(kPalette)] : s.color;
        std::ostringstream pts;
        const std::size_t n = std::min(s.x.size(), s.y.size());
        bool any = false;
        for (std::size_t i = 0; i < n; ++i) {
            if (!usable(s.x[i], s.y[i])) continue;
            pts << fmt(px(s.x[i])) << ',' << fmt(py(s.y[i])) << ' ';
            any = true;
        }
        if (!any) continue;
        svg << "<polyline points=\"" << pts.str() << "\" fill=\"none\" stroke=\"" << color
            << "\" stroke-width=\"1.5\"/>\n";
        if (!s.label.empty()) {
            svg << "<line x1=\"" << left + plot_w - 130 << "\" y1=\"" << legend_y << "\" x2=\""
                << left + plot_w - 110 << "\" y2=\"" << legend_y << "\" stroke=\"" << color
                << "\" stroke-width=\"2\"/>\n";
            svg << "<text x=\"" << left + plot_w - 104 << "\" y=\"" << legend_y + 4 << "\">"
                << escape(s.label) << "</text>\n";
            legend_y += 16;
        }
    }

    svg << "</g>\n</svg>\n";
    return svg.str();
}

} // namespace sqz
