#pragma once

#include <string>
#include <utility>
#include <vector>

namespace otfs {

/// Minimal self-contained SVG line chart; purely presentational.
struct PlotSeries {
    std::string label;
    std::vector<std::pair<double, double>> points;
};

struct PlotSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_y = false;
    std::vector<PlotSeries> series;
};

/// Renders one or more charts stacked vertically into a single SVG file.
void write_svg_plots(const std::string& path, const std::vector<PlotSpec>& plots);

}  // namespace otfs
