// svg_plot.hpp - self-contained SVG line charts of one quantity vs lambda*t

#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "kerrlambda/csv_writer.hpp"
#include "kerrlambda/number_format.hpp"
#include "kerrlambda/simulation_driver.hpp"

namespace kerrlambda {

namespace detail {

// Fixed-point text for coordinates, so output is stable and compact.
inline std::string coord(double x) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(2);
    os << (std::abs(x) < 0.005 ? 0.0 : x);
    return os.str();
}

// "Nice" tick step (1, 2 or 5 times a power of ten) giving about `target` ticks.
inline double tick_step(double span, int target) {
    if (!(span > 0.0)) return 1.0;
    const double raw = span / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double norm = raw / mag;
    const double nice = norm < 1.5 ? 1.0 : (norm < 3.5 ? 2.0 : (norm < 7.5 ? 5.0 : 10.0));
    return nice * mag;
}

inline std::string tick_label(double v, double step) {
    // Snap to the step grid to avoid labels like 0.30000000000000004.
    const double snapped = std::round(v / step) * step;
    std::ostringstream os;
    const int decimals = std::max(0, -static_cast<int>(std::floor(std::log10(step) + 1e-9)));
    os.setf(std::ios::fixed);
    os.precision(decimals);
    os << (std::abs(snapped) < step * 1e-9 ? 0.0 : snapped);
    return os.str();
}

}  // namespace detail

inline std::string render_svg(const std::vector<TimeSeries>& series_set, const std::string& quantity) {
    if (series_set.empty()) throw std::invalid_argument("render_svg: no series");
    const auto& grid = series_set.front().rows;
    for (const auto& s : series_set) {
        if (s.rows.size() != grid.size()) throw std::invalid_argument("render_svg: series have different time grids");
        for (std::size_t i = 0; i < grid.size(); ++i) {
            if (s.rows[i].t_scaled != grid[i].t_scaled) throw std::invalid_argument("render_svg: series have different time grids");
        }
    }
    column_value(grid.front(), quantity);  // rejects unknown names

    constexpr double width = 800, height = 500;
    constexpr double left = 80, right = 170, top = 30, bottom = 60;
    const double plot_w = width - left - right;
    const double plot_h = height - top - bottom;

    const double t0 = grid.front().t_scaled;
    const double t1 = grid.back().t_scaled;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const auto& s : series_set) {
        for (const auto& row : s.rows) {
            if (const auto v = column_value(row, quantity)) {
                lo = std::min(lo, *v);
                hi = std::max(hi, *v);
            }
        }
    }
    if (!std::isfinite(lo)) lo = hi = 0.0;
    lo = std::min(lo, 0.0);
    hi = std::max(hi, 0.0);
    if (hi - lo < 1e-12) {
        lo -= 1.0;
        hi += 1.0;
    }
    const double ystep = detail::tick_step(hi - lo, 6);
    lo = std::floor(lo / ystep - 1e-9) * ystep;
    hi = std::ceil(hi / ystep + 1e-9) * ystep;
    const double tspan = (t1 > t0) ? t1 - t0 : 1.0;
    const double xstep = detail::tick_step(tspan, 8);

    auto px = [&](double t) { return left + (t - t0) / tspan * plot_w; };
    auto py = [&](double v) { return top + (hi - v) / (hi - lo) * plot_h; };

    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"};

    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\" viewBox=\"0 0 "
       << width << ' ' << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    os << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";

    os << "<g class=\"axes\" stroke=\"black\" stroke-width=\"1\">\n";
    os << "<line x1=\"" << detail::coord(left) << "\" y1=\"" << detail::coord(top + plot_h) << "\" x2=\""
       << detail::coord(left + plot_w) << "\" y2=\"" << detail::coord(top + plot_h) << "\"/>\n";
    os << "<line x1=\"" << detail::coord(left) << "\" y1=\"" << detail::coord(top) << "\" x2=\"" << detail::coord(left)
       << "\" y2=\"" << detail::coord(top + plot_h) << "\"/>\n";
    if (lo < 0.0 && hi > 0.0) {
        os << "<line class=\"zero\" stroke=\"#999\" stroke-dasharray=\"4 3\" x1=\"" << detail::coord(left) << "\" y1=\""
           << detail::coord(py(0.0)) << "\" x2=\"" << detail::coord(left + plot_w) << "\" y2=\"" << detail::coord(py(0.0))
           << "\"/>\n";
    }
    os << "</g>\n";

    os << "<g class=\"ticks\">\n";
    for (double t = std::ceil(t0 / xstep) * xstep; t <= t1 + xstep * 1e-9; t += xstep) {
        const std::string x = detail::coord(px(t));
        os << "<line stroke=\"black\" x1=\"" << x << "\" y1=\"" << detail::coord(top + plot_h) << "\" x2=\"" << x << "\" y2=\""
           << detail::coord(top + plot_h + 5) << "\"/>\n";
        os << "<text x=\"" << x << "\" y=\"" << detail::coord(top + plot_h + 20) << "\" text-anchor=\"middle\">"
           << detail::tick_label(t, xstep) << "</text>\n";
    }
    for (double v = lo; v <= hi + ystep * 1e-9; v += ystep) {
        const std::string y = detail::coord(py(v));
        os << "<line stroke=\"black\" x1=\"" << detail::coord(left - 5) << "\" y1=\"" << y << "\" x2=\"" << detail::coord(left)
           << "\" y2=\"" << y << "\"/>\n";
        os << "<text x=\"" << detail::coord(left - 8) << "\" y=\"" << detail::coord(py(v) + 4) << "\" text-anchor=\"end\">"
           << detail::tick_label(v, ystep) << "</text>\n";
    }
    os << "</g>\n";

    os << "<text class=\"xlabel\" x=\"" << detail::coord(left + plot_w / 2) << "\" y=\"" << detail::coord(height - 15)
       << "\" text-anchor=\"middle\">λt</text>\n";
    os << "<text class=\"ylabel\" x=\"20\" y=\"" << detail::coord(top + plot_h / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 20 "
       << detail::coord(top + plot_h / 2) << ")\">" << quantity << "</text>\n";

    for (std::size_t k = 0; k < series_set.size(); ++k) {
        const char* color = palette[k % std::size(palette)];
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.2\" points=\"";
        bool first = true;
        for (const auto& row : series_set[k].rows) {
            const auto v = column_value(row, quantity);
            if (!v) continue;
            os << (first ? "" : " ") << detail::coord(px(row.t_scaled)) << ',' << detail::coord(py(*v));
            first = false;
        }
        os << "\"/>\n";
    }

    os << "<g class=\"legend\">\n";
    for (std::size_t k = 0; k < series_set.size(); ++k) {
        const char* color = palette[k % std::size(palette)];
        const double y = top + 15 + 20.0 * static_cast<double>(k);
        os << "<line stroke=\"" << color << "\" stroke-width=\"2\" x1=\"" << detail::coord(left + plot_w + 15) << "\" y1=\""
           << detail::coord(y) << "\" x2=\"" << detail::coord(left + plot_w + 40) << "\" y2=\"" << detail::coord(y) << "\"/>\n";
        os << "<text x=\"" << detail::coord(left + plot_w + 46) << "\" y=\"" << detail::coord(y + 4) << "\">χ="
           << format_number(series_set[k].config_echo.model.chi) << "</text>\n";
    }
    os << "</g>\n";
    os << "</svg>\n";
    return os.str();
}

inline void write_svg(const std::vector<TimeSeries>& series_set, const std::string& quantity, const std::filesystem::path& path) {
    write_text(path, render_svg(series_set, quantity));
}

}  // namespace kerrlambda
