#include "optosync/svg.hpp"

#include "optosync/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace optosync {

namespace {

constexpr int kWidth = 820;
constexpr int kHeight = 520;
constexpr int kMarginLeft = 70, kMarginRight = 20, kMarginTop = 40, kMarginBottom = 50;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    void grow(double v) {
        if (std::isfinite(v)) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    void pad() {
        if (!(hi > lo)) {
            lo -= 0.5;
            hi += 0.5;
        } else {
            const double m = 0.05 * (hi - lo);
            lo -= m;
            hi += m;
        }
    }
};

// round tick spacing to 1/2/5 times a power of ten
double nice_step(double span, int target_ticks) {
    const double raw = span / std::max(target_ticks, 1);
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double frac = raw / mag;
    double step;
    if (frac < 1.5)
        step = 1.0;
    else if (frac < 3.5)
        step = 2.0;
    else if (frac < 7.5)
        step = 5.0;
    else
        step = 10.0;
    return step * mag;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        default: out += c;
        }
    }
    return out;
}

} // namespace

void write_svg_plot(const PlotSpec& spec, const std::string& path) {
    size_t n_points = 0;
    for (const auto& s : spec.series) n_points += std::min(s.x.size(), s.y.size());
    if (spec.series.empty() || n_points == 0)
        throw IoError("nothing to plot for '" + path + "'");

    Range rx, ry;
    for (const auto& s : spec.series) {
        const size_t n = std::min(s.x.size(), s.y.size());
        for (size_t k = 0; k < n; ++k) {
            rx.grow(s.x[k]);
            ry.grow(s.y[k]);
        }
    }
    if (!std::isfinite(rx.lo) || !std::isfinite(ry.lo))
        throw IoError("no finite data to plot for '" + path + "'");
    rx.pad();
    ry.pad();

    const double plot_w = kWidth - kMarginLeft - kMarginRight;
    const double plot_h = kHeight - kMarginTop - kMarginBottom;
    auto sx = [&](double v) { return kMarginLeft + (v - rx.lo) / (rx.hi - rx.lo) * plot_w; };
    auto sy = [&](double v) { return kMarginTop + plot_h - (v - ry.lo) / (ry.hi - ry.lo) * plot_h; };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
    svg << "<rect width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";
    svg << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\" "
           "font-family=\"sans-serif\">"
        << xml_escape(spec.title) << "</text>\n";

    // axes box
    svg << "<rect x=\"" << kMarginLeft << "\" y=\"" << kMarginTop << "\" width=\"" << plot_w
        << "\" height=\"" << plot_h << "\" fill=\"none\" stroke=\"black\"/>\n";

    // ticks and grid
    const double xstep = nice_step(rx.hi - rx.lo, 8);
    for (double v = std::ceil(rx.lo / xstep) * xstep; v <= rx.hi + 1e-12 * xstep; v += xstep) {
        const double px = sx(v);
        svg << "<line x1=\"" << fmt(px) << "\" y1=\"" << kMarginTop + plot_h << "\" x2=\""
            << fmt(px) << "\" y2=\"" << kMarginTop + plot_h + 5 << "\" stroke=\"black\"/>\n";
        svg << "<line x1=\"" << fmt(px) << "\" y1=\"" << kMarginTop << "\" x2=\"" << fmt(px)
            << "\" y2=\"" << kMarginTop + plot_h << "\" stroke=\"#dddddd\"/>\n";
        svg << "<text x=\"" << fmt(px) << "\" y=\"" << kMarginTop + plot_h + 20
            << "\" text-anchor=\"middle\" font-size=\"11\" font-family=\"sans-serif\">" << fmt(v)
            << "</text>\n";
    }
    const double ystep = nice_step(ry.hi - ry.lo, 6);
    for (double v = std::ceil(ry.lo / ystep) * ystep; v <= ry.hi + 1e-12 * ystep; v += ystep) {
        const double py = sy(v);
        svg << "<line x1=\"" << kMarginLeft - 5 << "\" y1=\"" << fmt(py) << "\" x2=\""
            << kMarginLeft << "\" y2=\"" << fmt(py) << "\" stroke=\"black\"/>\n";
        svg << "<line x1=\"" << kMarginLeft << "\" y1=\"" << fmt(py) << "\" x2=\""
            << kMarginLeft + plot_w << "\" y2=\"" << fmt(py) << "\" stroke=\"#dddddd\"/>\n";
        svg << "<text x=\"" << kMarginLeft - 8 << "\" y=\"" << fmt(py + 4)
            << "\" text-anchor=\"end\" font-size=\"11\" font-family=\"sans-serif\">" << fmt(v)
            << "</text>\n";
    }

    // axis labels
    svg << "<text x=\"" << kMarginLeft + plot_w / 2 << "\" y=\"" << kHeight - 12
        << "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\">"
        << xml_escape(spec.x_label) << "</text>\n";
    svg << "<text x=\"18\" y=\"" << kMarginTop + plot_h / 2
        << "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\" "
           "transform=\"rotate(-90 18 "
        << kMarginTop + plot_h / 2 << ")\">" << xml_escape(spec.y_label) << "</text>\n";

    // series
    for (size_t si = 0; si < spec.series.size(); ++si) {
        const auto& s = spec.series[si];
        const char* color = kPalette[si % (sizeof(kPalette) / sizeof(kPalette[0]))];
        svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        const size_t n = std::min(s.x.size(), s.y.size());
        for (size_t k = 0; k < n; ++k) {
            if (!std::isfinite(s.x[k]) || !std::isfinite(s.y[k])) continue;
            svg << fmt(sx(s.x[k])) << ',' << fmt(sy(s.y[k])) << ' ';
        }
        svg << "\"/>\n";
        // legend
        const double lx = kMarginLeft + plot_w - 150;
        const double ly = kMarginTop + 16 + 18 * static_cast<double>(si);
        svg << "<line x1=\"" << fmt(lx) << "\" y1=\"" << fmt(ly - 4) << "\" x2=\"" << fmt(lx + 24)
            << "\" y2=\"" << fmt(ly - 4) << "\" stroke=\"" << color
            << "\" stroke-width=\"2\"/>\n";
        svg << "<text x=\"" << fmt(lx + 30) << "\" y=\"" << fmt(ly)
            << "\" font-size=\"12\" font-family=\"sans-serif\">" << xml_escape(s.label)
            << "</text>\n";
    }
    svg << "</svg>\n";

    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open '" + path + "' for writing");
    f << svg.str();
    if (!f) throw IoError("write failed for '" + path + "'");
}

void write_line_plot(const DataTable& table, const std::string& x_col,
                     const std::vector<std::string>& y_cols, const std::string& title,
                     const std::string& path) {
    if (table.rows.empty()) throw IoError("empty table for plot '" + path + "'");
    const int xi = table.column_index(x_col);
    if (xi < 0) throw IoError("missing column '" + x_col + "'");
    PlotSpec spec;
    spec.title = title;
    spec.x_label = x_col;
    for (const std::string& yc : y_cols) {
        const int yi = table.column_index(yc);
        if (yi < 0) throw IoError("missing column '" + yc + "'");
        PlotSeries s;
        s.label = yc;
        for (const auto& row : table.rows) {
            s.x.push_back(row[xi]);
            s.y.push_back(row[yi]);
        }
        spec.series.push_back(std::move(s));
    }
    write_svg_plot(spec, path);
}

} // namespace optosync
