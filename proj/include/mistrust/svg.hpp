#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "mistrust/stats.hpp"

namespace mistrust {

namespace detail {

inline std::string svg_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

}  // namespace detail

// Standalone SVG line chart of two ECDF step curves with dotted vertical
// median markers, in the style of a two-group duration comparison figure.
inline std::string render_ecdf_svg(const std::string& title, const std::string& name_a,
                                   const EcdfCurve& curve_a, double median_a,
                                   const std::string& name_b, const EcdfCurve& curve_b,
                                   double median_b, const std::string& x_label = "minutes") {
    constexpr double width = 640, height = 420;
    constexpr double left = 70, right = 620, top = 50, bottom = 370;

    double x_max = std::max({median_a, median_b, 1.0});
    for (double v : curve_a.values) x_max = std::max(x_max, v);
    for (double v : curve_b.values) x_max = std::max(x_max, v);
    double x_min = 0.0;
    for (double v : curve_a.values) x_min = std::min(x_min, v);
    for (double v : curve_b.values) x_min = std::min(x_min, v);
    if (x_max == x_min) x_max = x_min + 1.0;

    auto sx = [&](double v) { return left + (v - x_min) / (x_max - x_min) * (right - left); };
    auto sy = [&](double f) { return bottom - f * (bottom - top); };

    auto step_path = [&](const EcdfCurve& curve) {
        std::string d = "M " + detail::svg_num(sx(curve.values.front())) + " " +
                        detail::svg_num(sy(0));
        double prev_f = 0;
        for (std::size_t i = 0; i < curve.values.size(); ++i) {
            const double x = sx(curve.values[i]);
            d += " L " + detail::svg_num(x) + " " + detail::svg_num(sy(prev_f));
            d += " L " + detail::svg_num(x) + " " + detail::svg_num(sy(curve.fractions[i]));
            prev_f = curve.fractions[i];
        }
        d += " L " + detail::svg_num(right) + " " + detail::svg_num(sy(prev_f));
        return d;
    };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + detail::svg_num(width) +
           "\" height=\"" + detail::svg_num(height) + "\" viewBox=\"0 0 " + detail::svg_num(width) +
           " " + detail::svg_num(height) + "\">\n";
    svg += "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += "  <text x=\"320\" y=\"28\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"16\">" + title + "</text>\n";

    // axes
    svg += "  <line x1=\"" + detail::svg_num(left) + "\" y1=\"" + detail::svg_num(bottom) +
           "\" x2=\"" + detail::svg_num(right) + "\" y2=\"" + detail::svg_num(bottom) +
           "\" stroke=\"black\"/>\n";
    svg += "  <line x1=\"" + detail::svg_num(left) + "\" y1=\"" + detail::svg_num(top) +
           "\" x2=\"" + detail::svg_num(left) + "\" y2=\"" + detail::svg_num(bottom) +
           "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double f = i / 4.0;
        svg += "  <text x=\"" + detail::svg_num(left - 8) + "\" y=\"" + detail::svg_num(sy(f) + 4) +
               "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" +
               detail::svg_num(f) + "</text>\n";
        const double v = x_min + f * (x_max - x_min);
        svg += "  <text x=\"" + detail::svg_num(sx(v)) + "\" y=\"" + detail::svg_num(bottom + 18) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
               detail::svg_num(v) + "</text>\n";
    }
    svg += "  <text x=\"345\" y=\"405\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"12\">" + x_label + "</text>\n";

    // curves
    svg += "  <path d=\"" + step_path(curve_a) +
           "\" fill=\"none\" stroke=\"#d62728\" stroke-width=\"1.5\"/>\n";
    svg += "  <path d=\"" + step_path(curve_b) +
           "\" fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\"/>\n";

    // dotted median markers
    for (auto [m, color] : {std::pair{median_a, "#d62728"}, std::pair{median_b, "#1f77b4"}}) {
        svg += "  <line x1=\"" + detail::svg_num(sx(m)) + "\" y1=\"" + detail::svg_num(top) +
               "\" x2=\"" + detail::svg_num(sx(m)) + "\" y2=\"" + detail::svg_num(bottom) +
               "\" stroke=\"" + color + "\" stroke-dasharray=\"2,4\"/>\n";
    }

    // legend
    svg += "  <rect x=\"480\" y=\"330\" width=\"12\" height=\"3\" fill=\"#d62728\"/>\n";
    svg += "  <text x=\"498\" y=\"335\" font-family=\"sans-serif\" font-size=\"12\">" + name_a +
           "</text>\n";
    svg += "  <rect x=\"480\" y=\"348\" width=\"12\" height=\"3\" fill=\"#1f77b4\"/>\n";
    svg += "  <text x=\"498\" y=\"353\" font-family=\"sans-serif\" font-size=\"12\">" + name_b +
           "</text>\n";
    svg += "</svg>\n";
    return svg;
}

}  // namespace mistrust
