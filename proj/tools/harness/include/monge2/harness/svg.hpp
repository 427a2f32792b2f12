#pragma once

#include <string>
#include <vector>

namespace monge2::harness {

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    /// Points only (scatter) instead of a polyline with markers.
    bool scatter = false;
};

struct Plot {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_x = false;
    bool log_y = false;
    std::vector<Series> series;
};

/// Static SVG document for the plot. Non-finite points, and non-positive ones on
/// log axes, are dropped.
std::string render_svg(const Plot& plot);

} // namespace monge2::harness
