#pragma once

#include <string>
#include <vector>

namespace rpet {

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

struct Plot {
    std::string name;  // file stem
    std::string title;
    std::string x_label = "Strain [mm/mm]";
    std::string y_label = "Stress [MPa]";
    std::vector<Series> series;
};

/// Line chart with linear axes starting at zero, ticks on 1-2-5 steps, and
/// a legend.  Output is a pure function of the plot.
std::string render_svg(const Plot& plot);

}  // namespace rpet
