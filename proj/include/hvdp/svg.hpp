#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace hvdp {

struct PlotSeries {
    std::string label;
    std::vector<double> x, y;
    std::string color = "#1f77b4";
    bool dashed = false;
    bool markers = true;
    bool line = true;
};

struct PlotSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_x = false;
    int width = 640;
    int height = 420;
};

// Static SVG 1.1 line/marker plot with axes, ticks and a legend.
std::string render_svg(const PlotSpec& spec, const std::vector<PlotSeries>& series);
void write_svg(const std::filesystem::path& path, const PlotSpec& spec, const std::vector<PlotSeries>& series);

}  // namespace hvdp
