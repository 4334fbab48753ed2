#include "datasim/svgplot.hpp"

#include "datasim/stats.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace datasim {

namespace {

const char* kPalette[] = {"#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e", "#e6ab02",
                          "#a6761d", "#666666", "#1f78b4", "#b2df8a", "#fb9a99", "#cab2d6"};

} // namespace

void write_svg_lineplot(const std::string& path, const std::string& title,
                        const std::vector<PlotSeries>& series, const std::string& x_label,
                        const std::string& y_label) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path);

    double xmin = 0.0, xmax = 1.0;
    bool first = true;
    for (const auto& s : series) {
        for (double x : s.x) {
            if (first) {
                xmin = xmax = x;
                first = false;
            }
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
        }
    }
    if (xmax <= xmin) xmax = xmin + 1.0;
    const double ymin = 0.0, ymax = 1.0;

    const double W = 760, H = 480;
    const double left = 60, right = 180, top = 40, bottom = 50;
    const double pw = W - left - right, ph = H - top - bottom;
    auto px = [&](double x) { return left + (x - xmin) / (xmax - xmin) * pw; };
    auto py = [&](double y) { return top + (ymax - y) / (ymax - ymin) * ph; };

    f << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H << "'>\n";
    f << "<rect width='100%' height='100%' fill='white'/>\n";
    f << "<text x='" << W / 2 << "' y='20' text-anchor='middle' font-size='15'>" << title
      << "</text>\n";
    // axes
    f << "<line x1='" << left << "' y1='" << py(0) << "' x2='" << left + pw << "' y2='" << py(0)
      << "' stroke='black'/>\n";
    f << "<line x1='" << left << "' y1='" << py(0) << "' x2='" << left << "' y2='" << py(1)
      << "' stroke='black'/>\n";
    for (double tick : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        f << "<line x1='" << left - 4 << "' y1='" << py(tick) << "' x2='" << left << "' y2='"
          << py(tick) << "' stroke='black'/>\n";
        f << "<text x='" << left - 8 << "' y='" << py(tick) + 4
          << "' text-anchor='end' font-size='11'>" << format_double(tick) << "</text>\n";
    }
    for (const auto& s : series) {
        for (double x : s.x) {
            f << "<line x1='" << px(x) << "' y1='" << py(0) << "' x2='" << px(x) << "' y2='"
              << py(0) + 4 << "' stroke='black'/>\n";
            f << "<text x='" << px(x) << "' y='" << py(0) + 16
              << "' text-anchor='middle' font-size='11'>" << format_double(x) << "</text>\n";
        }
        break;
    }
    f << "<text x='" << left + pw / 2 << "' y='" << H - 12
      << "' text-anchor='middle' font-size='12'>" << x_label << "</text>\n";
    f << "<text x='16' y='" << top + ph / 2 << "' font-size='12' transform='rotate(-90 16 "
      << top + ph / 2 << ")' text-anchor='middle'>" << y_label << "</text>\n";

    std::size_t ci = 0;
    for (const auto& s : series) {
        const char* color = kPalette[ci % (sizeof(kPalette) / sizeof(kPalette[0]))];
        f << "<polyline fill='none' stroke='" << color << "' stroke-width='1.5' points='";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            f << px(s.x[i]) << "," << py(s.y[i]) << " ";
        }
        f << "'/>\n";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            f << "<circle cx='" << px(s.x[i]) << "' cy='" << py(s.y[i]) << "' r='2.5' fill='"
              << color << "'/>\n";
            if (i < s.err.size() && s.err[i] > 0.0) {
                const double lo = std::max(0.0, s.y[i] - s.err[i]);
                const double hi = std::min(1.0, s.y[i] + s.err[i]);
                f << "<line x1='" << px(s.x[i]) << "' y1='" << py(lo) << "' x2='" << px(s.x[i])
                  << "' y2='" << py(hi) << "' stroke='" << color << "'/>\n";
            }
        }
        f << "<text x='" << left + pw + 10 << "' y='" << top + 14 + 16 * static_cast<double>(ci)
          << "' font-size='11' fill='" << color << "'>" << s.name << "</text>\n";
        ++ci;
    }
    f << "</svg>\n";
}

} // namespace datasim
