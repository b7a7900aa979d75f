#include "psctsa/svg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "psctsa/errors.hpp"
#include "psctsa/report.hpp"

namespace psctsa {

namespace {

constexpr double kWidth = 860.0;
constexpr double kHeight = 520.0;
constexpr double kMarginLeft = 72.0;
constexpr double kMarginRight = 24.0;
constexpr double kMarginTop = 40.0;
constexpr double kMarginBottom = 56.0;

const char* kPalette[] = {"#1f6fb4", "#d95319", "#3a923a", "#7b4fa6", "#b0336e"};

std::string escape_xml(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

std::string tick_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    // snprintf honors the global locale's decimal point; normalize it.
    for (char& c : buf) {
        if (c == ',') c = '.';
    }
    return buf;
}

struct Axis {
    double lo;
    double hi;
    double scale(double v, double px_lo, double px_hi) const {
        return px_lo + (v - lo) / (hi - lo) * (px_hi - px_lo);
    }
};

Axis fit_axis(double lo, double hi) {
    if (!(lo < hi)) {
        lo -= 1.0;
        hi += 1.0;
    }
    const double pad = 0.05 * (hi - lo);
    return {lo - pad, hi + pad};
}

} // namespace

void write_line_plot(std::ostream& out, const std::string& title, const std::string& x_label,
                     const std::string& y_label, const std::vector<PlotSeries>& series,
                     const std::vector<PlotMarker>& markers) {
    double x_min = std::numeric_limits<double>::infinity();
    double x_max = -x_min;
    double y_min = x_min;
    double y_max = -x_min;
    for (const auto& s : series) {
        for (const auto& [x, y] : s.points) {
            x_min = std::min(x_min, x);
            x_max = std::max(x_max, x);
            y_min = std::min(y_min, y);
            y_max = std::max(y_max, y);
        }
    }
    for (const auto& m : markers) {
        x_min = std::min(x_min, m.x);
        x_max = std::max(x_max, m.x);
        y_min = std::min(y_min, m.y);
        y_max = std::max(y_max, m.y);
    }
    if (!std::isfinite(x_min)) {
        x_min = y_min = 0.0;
        x_max = y_max = 1.0;
    }
    const Axis ax = fit_axis(x_min, x_max);
    const Axis ay = fit_axis(y_min, y_max);
    const double px_l = kMarginLeft, px_r = kWidth - kMarginRight;
    const double py_b = kHeight - kMarginBottom, py_t = kMarginTop;

    auto sx = [&](double v) { return ax.scale(v, px_l, px_r); };
    auto sy = [&](double v) { return ay.scale(v, py_b, py_t); };

    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"16\">" << escape_xml(title) << "</text>\n";

    // frame + ticks
    out << "<rect x=\"" << px_l << "\" y=\"" << py_t << "\" width=\"" << px_r - px_l
        << "\" height=\"" << py_b - py_t << "\" fill=\"none\" stroke=\"#444\"/>\n";
    const int n_ticks = 6;
    for (int i = 0; i <= n_ticks; ++i) {
        const double fx = ax.lo + (ax.hi - ax.lo) * i / n_ticks;
        const double fy = ay.lo + (ay.hi - ay.lo) * i / n_ticks;
        out << "<line x1=\"" << sx(fx) << "\" y1=\"" << py_b << "\" x2=\"" << sx(fx)
            << "\" y2=\"" << py_b + 5 << "\" stroke=\"#444\"/>\n"
            << "<text x=\"" << sx(fx) << "\" y=\"" << py_b + 20
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
            << tick_label(fx) << "</text>\n"
            << "<line x1=\"" << px_l - 5 << "\" y1=\"" << sy(fy) << "\" x2=\"" << px_l
            << "\" y2=\"" << sy(fy) << "\" stroke=\"#444\"/>\n"
            << "<text x=\"" << px_l - 8 << "\" y=\"" << sy(fy) + 4
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
            << tick_label(fy) << "</text>\n";
    }
    if (ay.lo < 0.0 && ay.hi > 0.0) {
        out << "<line x1=\"" << px_l << "\" y1=\"" << sy(0.0) << "\" x2=\"" << px_r
            << "\" y2=\"" << sy(0.0) << "\" stroke=\"#bbb\" stroke-dasharray=\"4 3\"/>\n";
    }
    out << "<text x=\"" << (px_l + px_r) / 2 << "\" y=\"" << kHeight - 14
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
        << escape_xml(x_label) << "</text>\n"
        << "<text x=\"18\" y=\"" << (py_t + py_b) / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
        << "transform=\"rotate(-90 18 " << (py_t + py_b) / 2 << ")\">" << escape_xml(y_label)
        << "</text>\n";

    for (std::size_t i = 0; i < series.size(); ++i) {
        const char* color = kPalette[i % std::size(kPalette)];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.6\" points=\"";
        for (const auto& [x, y] : series[i].points) {
            out << tick_label(sx(x)) << ',' << tick_label(sy(y)) << ' ';
        }
        out << "\"/>\n";
        out << "<text x=\"" << px_r - 10 << "\" y=\"" << py_t + 18 + 16 * double(i)
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\" fill=\""
            << color << "\">" << escape_xml(series[i].label) << "</text>\n";
    }

    for (const auto& m : markers) {
        out << "<circle cx=\"" << sx(m.x) << "\" cy=\"" << sy(m.y) << "\" r=\"5\" stroke=\"#222\""
            << " stroke-width=\"1.5\" fill=\"" << (m.filled ? "#222" : "white") << "\"/>\n";
    }

    out << "</svg>\n";
    if (!out) throw IoError("failed writing SVG plot");
}

} // namespace psctsa
