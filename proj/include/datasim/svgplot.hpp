#pragma once

#include <string>
#include <vector>

namespace datasim {

// Minimal line-plot writer: one series per method, x = deviation, y = PESR,
// vertical error bars. Good enough for eyeballing power curves.
struct PlotSeries {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
    std::vector<double> err;
};

void write_svg_lineplot(const std::string& path, const std::string& title,
                        const std::vector<PlotSeries>& series, const std::string& x_label,
                        const std::string& y_label);

} // namespace datasim
