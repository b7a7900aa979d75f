#pragma once

#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace psctsa {

struct PlotSeries {
    std::string label;
    std::vector<std::pair<double, double>> points;
};

/// Equilibrium-style point marker: filled circle for a sink, open for a source.
struct PlotMarker {
    double x;
    double y;
    bool filled;
};

/// Minimal static line plot: axes with ticks, one polyline per series, a
/// legend, optional markers. Output is standalone valid XML.
void write_line_plot(std::ostream& out, const std::string& title, const std::string& x_label,
                     const std::string& y_label, const std::vector<PlotSeries>& series,
                     const std::vector<PlotMarker>& markers = {});

} // namespace psctsa
