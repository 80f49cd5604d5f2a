#include "finform/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace finform {

namespace {
constexpr double kW = 800.0, kH = 480.0;
constexpr double kL = 64.0, kR = 16.0, kT = 36.0, kB = 44.0;
}  // namespace

void write_svg_plot(const std::string& path, const std::string& title,
                    const std::string& x_label, const std::string& y_label,
                    const std::vector<SvgSeries>& series, const std::vector<SvgBand>& bands) {
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const SvgSeries& s : series) {
        for (double v : s.x) {
            xmin = std::min(xmin, v);
            xmax = std::max(xmax, v);
        }
        for (double v : s.y) {
            ymin = std::min(ymin, v);
            ymax = std::max(ymax, v);
        }
    }
    for (const SvgBand& b : bands) {
        ymin = std::min(ymin, b.y_lo);
        ymax = std::max(ymax, b.y_hi);
    }
    if (!std::isfinite(xmin) || xmin == xmax) {
        xmin = 0.0;
        xmax = 1.0;
    }
    if (!std::isfinite(ymin) || ymin == ymax) {
        ymin -= 0.5;
        ymax += 0.5;
    }
    const double ypad = 0.05 * (ymax - ymin);
    ymin -= ypad;
    ymax += ypad;

    auto px = [&](double x) { return kL + (x - xmin) / (xmax - xmin) * (kW - kL - kR); };
    auto py = [&](double y) { return kH - kB - (y - ymin) / (ymax - ymin) * (kH - kT - kB); };

    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"480\" "
          "viewBox=\"0 0 800 480\">\n";
    os << "<rect width=\"800\" height=\"480\" fill=\"white\"/>\n";

    for (const SvgBand& b : bands) {
        const double y0 = py(b.y_hi), y1 = py(b.y_lo);
        os << "<rect x=\"" << kL << "\" y=\"" << y0 << "\" width=\"" << (kW - kL - kR)
           << "\" height=\"" << (y1 - y0) << "\" fill=\"" << b.color << "\"/>\n";
    }

    // axes
    os << "<line x1=\"" << kL << "\" y1=\"" << kH - kB << "\" x2=\"" << kW - kR << "\" y2=\""
       << kH - kB << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << kL << "\" y1=\"" << kT << "\" x2=\"" << kL << "\" y2=\"" << kH - kB
       << "\" stroke=\"black\"/>\n";

    char buf[64];
    for (int i = 0; i <= 5; ++i) {
        const double xv = xmin + (xmax - xmin) * i / 5.0;
        const double yv = ymin + (ymax - ymin) * i / 5.0;
        std::snprintf(buf, sizeof(buf), "%.4g", xv);
        os << "<text x=\"" << px(xv) << "\" y=\"" << kH - kB + 18
           << "\" font-size=\"12\" text-anchor=\"middle\">" << buf << "</text>\n";
        std::snprintf(buf, sizeof(buf), "%.4g", yv);
        os << "<text x=\"" << kL - 6 << "\" y=\"" << py(yv) + 4
           << "\" font-size=\"12\" text-anchor=\"end\">" << buf << "</text>\n";
    }

    int legend_y = 20;
    for (const SvgSeries& s : series) {
        os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.2\" points=\"";
        const std::size_t stride = std::max<std::size_t>(1, s.x.size() / 4000);
        for (std::size_t i = 0; i < s.x.size(); i += stride) {
            std::snprintf(buf, sizeof(buf), "%.2f,%.2f ", px(s.x[i]), py(s.y[i]));
            os << buf;
        }
        if (!s.x.empty()) {
            std::snprintf(buf, sizeof(buf), "%.2f,%.2f", px(s.x.back()), py(s.y.back()));
            os << buf;
        }
        os << "\"/>\n";
        os << "<text x=\"" << kW - kR - 4 << "\" y=\"" << legend_y << "\" font-size=\"12\" "
           << "text-anchor=\"end\" fill=\"" << s.color << "\">" << s.label << "</text>\n";
        legend_y += 16;
    }

    os << "<text x=\"" << (kL + kW - kR) / 2 << "\" y=\"16\" font-size=\"14\" "
          "text-anchor=\"middle\">" << title << "</text>\n";
    os << "<text x=\"" << (kL + kW - kR) / 2 << "\" y=\"" << kH - 8
       << "\" font-size=\"12\" text-anchor=\"middle\">" << x_label << "</text>\n";
    os << "<text x=\"14\" y=\"" << (kT + kH - kB) / 2
       << "\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 14 "
       << (kT + kH - kB) / 2 << ")\">" << y_label << "</text>\n";
    os << "</svg>\n";
}

}  // namespace finform
