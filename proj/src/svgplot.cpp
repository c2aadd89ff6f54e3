#include "otfslink/svgplot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace otfs {

namespace {

constexpr int kWidth = 720;
constexpr int kHeight = 420;
constexpr int kMarginL = 70, kMarginR = 160, kMarginT = 40, kMarginB = 50;

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                         "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};

struct Range {
    double lo = 0.0, hi = 1.0;
};

double nice_floor(double v) { return std::floor(v); }

void render_plot(std::ostringstream& svg, const PlotSpec& plot, int y_offset) {
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& s : plot.series) {
        for (auto [x, y] : s.points) {
            if (plot.log_y && y <= 0) continue;
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            const double yy = plot.log_y ? std::log10(y) : y;
            ymin = std::min(ymin, yy);
            ymax = std::max(ymax, yy);
        }
    }
    if (xmin > xmax) {
        xmin = 0;
        xmax = 1;
    }
    if (ymin > ymax) {
        ymin = plot.log_y ? -3 : 0;
        ymax = plot.log_y ? 0 : 1;
    }
    if (xmax == xmin) xmax = xmin + 1;
    if (ymax == ymin) ymax = ymin + 1;
    if (plot.log_y) {
        ymin = nice_floor(ymin);
        ymax = std::ceil(ymax);
    } else {
        const double pad = 0.05 * (ymax - ymin);
        ymin -= pad;
        ymax += pad;
    }

    const double plot_w = kWidth - kMarginL - kMarginR;
    const double plot_h = kHeight - kMarginT - kMarginB;
    auto px = [&](double x) { return kMarginL + (x - xmin) / (xmax - xmin) * plot_w; };
    auto py = [&](double y) {
        const double yy = plot.log_y ? std::log10(y) : y;
        return y_offset + kMarginT + (1.0 - (yy - ymin) / (ymax - ymin)) * plot_h;
    };

    svg << "<rect x='" << kMarginL << "' y='" << y_offset + kMarginT << "' width='" << plot_w
        << "' height='" << plot_h << "' fill='none' stroke='#333'/>\n";
    svg << "<text x='" << kWidth / 2 << "' y='" << y_offset + 22
        << "' text-anchor='middle' font-size='15'>" << plot.title << "</text>\n";
    svg << "<text x='" << kMarginL + plot_w / 2 << "' y='" << y_offset + kHeight - 12
        << "' text-anchor='middle' font-size='12'>" << plot.x_label << "</text>\n";
    svg << "<text x='16' y='" << y_offset + kMarginT + plot_h / 2
        << "' text-anchor='middle' font-size='12' transform='rotate(-90 16 "
        << y_offset + kMarginT + plot_h / 2 << ")'>" << plot.y_label << "</text>\n";

    // Gridlines and tick labels.
    const int n_xticks = 6;
    for (int i = 0; i <= n_xticks; ++i) {
        const double x = xmin + (xmax - xmin) * i / n_xticks;
        svg << "<line x1='" << px(x) << "' y1='" << y_offset + kMarginT << "' x2='" << px(x)
            << "' y2='" << y_offset + kMarginT + plot_h << "' stroke='#ddd'/>\n";
        svg << "<text x='" << px(x) << "' y='" << y_offset + kMarginT + plot_h + 16
            << "' text-anchor='middle' font-size='11'>" << x << "</text>\n";
    }
    if (plot.log_y) {
        for (int e = static_cast<int>(ymin); e <= static_cast<int>(ymax); ++e) {
            const double y = std::pow(10.0, e);
            svg << "<line x1='" << kMarginL << "' y1='" << py(y) << "' x2='" << kMarginL + plot_w
                << "' y2='" << py(y) << "' stroke='#ddd'/>\n";
            svg << "<text x='" << kMarginL - 6 << "' y='" << py(y) + 4
                << "' text-anchor='end' font-size='11'>1e" << e << "</text>\n";
        }
    } else {
        const int n_yticks = 5;
        for (int i = 0; i <= n_yticks; ++i) {
            const double yy = ymin + (ymax - ymin) * i / n_yticks;
            const double y = plot.log_y ? std::pow(10.0, yy) : yy;
            svg << "<line x1='" << kMarginL << "' y1='" << py(y) << "' x2='" << kMarginL + plot_w
                << "' y2='" << py(y) << "' stroke='#ddd'/>\n";
            svg << "<text x='" << kMarginL - 6 << "' y='" << py(y) + 4
                << "' text-anchor='end' font-size='11'>" << yy << "</text>\n";
        }
    }

    int color_idx = 0;
    for (const auto& s : plot.series) {
        const char* color = kColors[color_idx % 8];
        svg << "<polyline fill='none' stroke='" << color << "' stroke-width='1.8' points='";
        for (auto [x, y] : s.points) {
            if (plot.log_y && y <= 0) continue;
            svg << px(x) << "," << py(y) << " ";
        }
        svg << "'/>\n";
        for (auto [x, y] : s.points) {
            if (plot.log_y && y <= 0) continue;
            svg << "<circle cx='" << px(x) << "' cy='" << py(y) << "' r='2.5' fill='" << color
                << "'/>\n";
        }
        const int ly = y_offset + kMarginT + 16 * color_idx;
        svg << "<line x1='" << kMarginL + plot_w + 10 << "' y1='" << ly << "' x2='"
            << kMarginL + plot_w + 30 << "' y2='" << ly << "' stroke='" << color
            << "' stroke-width='2'/>\n";
        svg << "<text x='" << kMarginL + plot_w + 34 << "' y='" << ly + 4 << "' font-size='11'>"
            << s.label << "</text>\n";
        ++color_idx;
    }
}

}  // namespace

void write_svg_plots(const std::string& path, const std::vector<PlotSpec>& plots) {
    std::ostringstream svg;
    const int total_h = kHeight * std::max<size_t>(1, plots.size());
    svg << "<svg xmlns='http://www.w3.org/2000/svg' width='" << kWidth << "' height='" << total_h
        << "' font-family='sans-serif'>\n<rect width='100%' height='100%' fill='white'/>\n";
    int y = 0;
    for (const auto& plot : plots) {
        render_plot(svg, plot, y);
        y += kHeight;
    }
    svg << "</svg>\n";

    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write plot file '" + path + "'");
    out << svg.str();
}

}  // namespace otfs
