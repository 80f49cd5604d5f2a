#pragma once

#include <string>
#include <vector>

namespace finform {

struct SvgSeries {
    std::string label;
    std::string color = "#1f6fb2";
    std::vector<double> x;
    std::vector<double> y;
};

struct SvgBand {  // horizontal band [y_lo, y_hi] across the full time axis
    double y_lo = 0.0;
    double y_hi = 0.0;
    std::string color = "#d4e9d4";
};

/// Minimal line plot: fixed 800x480 viewport, one polyline per series,
/// axis labels, optional shaded bands. No external renderer involved.
void write_svg_plot(const std::string& path, const std::string& title,
                    const std::string& x_label, const std::string& y_label,
                    const std::vector<SvgSeries>& series, const std::vector<SvgBand>& bands = {});

}  // namespace finform
