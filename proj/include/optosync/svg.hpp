#ifndef OPTOSYNC_SVG_HPP
#define OPTOSYNC_SVG_HPP

#include "optosync/csv.hpp"

#include <string>
#include <vector>

namespace optosync {

// One polyline per named series. For a time-series plot x is the shared
// abscissa column; for a parametric (portrait) plot each series carries its
// own x column.
struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

struct PlotSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<PlotSeries> series;
};

// Deterministic static SVG (fixed canvas, fixed palette, no timestamps).
// Throws IoError when there is nothing to draw or the file cannot be written.
void write_svg_plot(const PlotSpec& spec, const std::string& path);

// Line plot of table columns y_cols against x_col.
void write_line_plot(const DataTable& table, const std::string& x_col,
                     const std::vector<std::string>& y_cols, const std::string& title,
                     const std::string& path);

} // namespace optosync

#endif
