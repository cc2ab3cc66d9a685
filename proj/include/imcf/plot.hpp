#pragma once

#include <optional>
#include <string>
#include <vector>

namespace imcf::plot {

struct Series {
    std::vector<double> x;
    std::vector<double> y;
    std::string label;
    std::string color = "#1f77b4";
};

struct Chart {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_x = false;
    /// Optional horizontal reference line (dashed) with its legend label.
    std::optional<double> rule_y;
    std::string rule_label;
    /// Clip the y range; unset bounds follow the data.
    std::optional<double> y_min;
    std::optional<double> y_max;
    int width = 720;
    int height = 440;
};

/// Static SVG line chart: axes, ticks, one polyline per series, legend. Non-finite points and
/// (for log_x) non-positive x are dropped.
std::string render_svg(const Chart& chart, const std::vector<Series>& series);

/// 1-2-5 tick positions covering [lo, hi].
std::vector<double> nice_ticks(double lo, double hi, int target = 6);

}  // namespace imcf::plot
