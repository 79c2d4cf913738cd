#pragma once

#include <string>
#include <vector>

namespace sqz {

// Dependency-free line plots for quick inspection of run output. Not a
// plotting library; one canvas, shared axes, optional log-scale y.

struct SvgSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    std::string color; // empty = pick from the default cycle
};

struct SvgPlotOptions {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_y = false; // non-positive samples are dropped
    int width = 760;
    int height = 480;
};

// Returns a complete standalone SVG document. Throws std::invalid_argument
// when no finite (and, for log_y, positive) sample survives.
std::string render_line_plot(const std::vector<SvgSeries>& series, const SvgPlotOptions& options);

} // namespace sqz
