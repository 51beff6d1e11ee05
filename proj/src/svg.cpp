#include "lpgame/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace lpgame {
namespace {

constexpr double kMarginLeft = 78.0;
constexpr double kMarginRight = 24.0;
constexpr double kMarginTop = 34.0;
constexpr double kMarginBottom = 58.0;

std::string fmt(double value, const char* spec = "%.2f") {
    char buffer[40];
    std::snprintf(buffer, sizeof buffer, spec, value);
    return buffer;
}

// Tick step of the form {1,2,5}*10^k close to range/target.
double nice_step(double range, int target) {
    const double raw = range / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double norm = raw / mag;
    double step;
    if (norm <= 1.5) step = 1.0;
    else if (norm <= 3.5) step = 2.0;
    else if (norm <= 7.5) step = 5.0;
    else step = 10.0;
    return step * mag;
}

std::string xml_escape(const std::string& text) {
    std::string out;
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

std::string render_chart(const ResultTable& table, const std::string& x_column,
                         const std::string& y_column, int width, int height) {
    const int xi = table.column_index(x_column);
    const int yi = table.column_index(y_column);
    if (xi < 0) throw std::invalid_argument("chart: no column named '" + x_column + "'");
    if (yi < 0) throw std::invalid_argument("chart: no column named '" + y_column + "'");

    std::vector<std::pair<double, double>> points;
    for (const auto& row : table.rows) {
        if (static_cast<size_t>(xi) >= row.size() || static_cast<size_t>(yi) >= row.size())
            continue;
        const double* x = std::get_if<double>(&row[static_cast<size_t>(xi)]);
        const double* y = std::get_if<double>(&row[static_cast<size_t>(yi)]);
        if (!x || !y || !std::isfinite(*x) || !std::isfinite(*y)) continue;
        points.emplace_back(*x, *y);
    }
    if (points.size() < 2)
        throw std::invalid_argument("chart: need at least 2 finite points for '" + y_column +
                                    "' vs '" + x_column + "'");

    double x_min = points[0].first, x_max = points[0].first;
    double y_min = points[0].second, y_max = points[0].second;
    for (const auto& [x, y] : points) {
        x_min = std::min(x_min, x);
        x_max = std::max(x_max, x);
        y_min = std::min(y_min, y);
        y_max = std::max(y_max, y);
    }
    if (x_max == x_min) { x_min -= 1.0; x_max += 1.0; }
    if (y_max == y_min) { y_min -= 1.0; y_max += 1.0; }

    const double plot_w = width - kMarginLeft - kMarginRight;
    const double plot_h = height - kMarginTop - kMarginBottom;
    auto sx = [&](double x) { return kMarginLeft + (x - x_min) / (x_max - x_min) * plot_w; };
    auto sy = [&](double y) {
        return kMarginTop + plot_h - (y - y_min) / (y_max - y_min) * plot_h;
    };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) +
           "\" height=\"" + std::to_string(height) + "\" viewBox=\"0 0 " +
           std::to_string(width) + " " + std::to_string(height) + "\">\n";
    svg += "<rect x=\"0\" y=\"0\" width=\"" + std::to_string(width) + "\" height=\"" +
           std::to_string(height) + "\" fill=\"white\"/>\n";

    // gridlines and tick labels
    const double x_step = nice_step(x_max - x_min, 5);
    const double y_step = nice_step(y_max - y_min, 5);
    svg += "<g stroke=\"#d0d0d0\" stroke-width=\"1\">\n";
    for (double t = std::ceil(x_min / x_step) * x_step; t <= x_max + 1e-9 * x_step;
         t += x_step) {
        svg += "<line x1=\"" + fmt(sx(t)) + "\" y1=\"" + fmt(kMarginTop) + "\" x2=\"" +
               fmt(sx(t)) + "\" y2=\"" + fmt(kMarginTop + plot_h) + "\"/>\n";
    }
    for (double t = std::ceil(y_min / y_step) * y_step; t <= y_max + 1e-9 * y_step;
         t += y_step) {
        svg += "<line x1=\"" + fmt(kMarginLeft) + "\" y1=\"" + fmt(sy(t)) + "\" x2=\"" +
               fmt(kMarginLeft + plot_w) + "\" y2=\"" + fmt(sy(t)) + "\"/>\n";
    }
    svg += "</g>\n";
    svg += "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#333333\">\n";
    for (double t = std::ceil(x_min / x_step) * x_step; t <= x_max + 1e-9 * x_step;
         t += x_step) {
        svg += "<text x=\"" + fmt(sx(t)) + "\" y=\"" + fmt(kMarginTop + plot_h + 16.0) +
               "\" text-anchor=\"middle\">" + format_double(t) + "</text>\n";
    }
    for (double t = std::ceil(y_min / y_step) * y_step; t <= y_max + 1e-9 * y_step;
         t += y_step) {
        svg += "<text x=\"" + fmt(kMarginLeft - 6.0) + "\" y=\"" + fmt(sy(t) + 4.0) +
               "\" text-anchor=\"end\">" + format_double(t) + "</text>\n";
    }
    svg += "</g>\n";

    // axes
    svg += "<g stroke=\"#000000\" stroke-width=\"1.5\">\n";
    svg += "<line x1=\"" + fmt(kMarginLeft) + "\" y1=\"" + fmt(kMarginTop + plot_h) + "\" x2=\"" +
           fmt(kMarginLeft + plot_w) + "\" y2=\"" + fmt(kMarginTop + plot_h) + "\"/>\n";
    svg += "<line x1=\"" + fmt(kMarginLeft) + "\" y1=\"" + fmt(kMarginTop) + "\" x2=\"" +
           fmt(kMarginLeft) + "\" y2=\"" + fmt(kMarginTop + plot_h) + "\"/>\n";
    svg += "</g>\n";

    // data polyline
    svg += "<polyline fill=\"none\" stroke=\"#1f6fb2\" stroke-width=\"2\" points=\"";
    for (size_t i = 0; i < points.size(); ++i) {
        if (i) svg += ' ';
        svg += fmt(sx(points[i].first)) + "," + fmt(sy(points[i].second));
    }
    svg += "\"/>\n";

    // labels
    svg += "<g font-family=\"sans-serif\" font-size=\"13\" fill=\"#000000\">\n";
    svg += "<text x=\"" + fmt(kMarginLeft + plot_w / 2.0) + "\" y=\"" +
           fmt(static_cast<double>(height) - 14.0) + "\" text-anchor=\"middle\">" +
           xml_escape(x_column) + "</text>\n";
    svg += "<text x=\"18\" y=\"" + fmt(kMarginTop + plot_h / 2.0) +
           "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " +
           fmt(kMarginTop + plot_h / 2.0) + ")\">" + xml_escape(y_column) + "</text>\n";
    svg += "<text x=\"" + fmt(kMarginLeft + plot_w / 2.0) +
           "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" + xml_escape(y_column) +
           " vs " + xml_escape(x_column) + "</text>\n";
    svg += "</g>\n";
    svg += "</svg>\n";
    return svg;
}

void emit_chart(const ResultTable& table, const std::string& x_column,
                const std::string& y_column, const std::string& path) {
    const std::string svg = render_chart(table, x_column, y_column);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << svg;
    out.flush();
    if (!out) throw IoError("failed writing SVG to '" + path + "'");
}

}  // namespace lpgame
