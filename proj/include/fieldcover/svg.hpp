#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "fieldcover/geometry.hpp"
#include "fieldcover/planners.hpp"

namespace fieldcover {

namespace detail {

inline std::string svg_num(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

inline std::string xml_escape(const std::string& s) {
    std::string out;
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

}  // namespace detail

// Plan rendering: environment outline, hexagon cells, samples coloured by
// provenance, optional tour polyline. World coordinates are mapped into a
// fixed-height canvas with the y axis flipped.
inline std::string render_plan_svg(const Environment& env, const MeasurementSet& samples,
                                   const std::vector<Point2>* tour_points = nullptr, bool draw_cells = true) {
    const Aabb& bb = env.bounding_box();
    const double margin = std::max(bb.width(), bb.height()) * 0.06 + samples.r_min_used;
    const double world_w = bb.width() + 2 * margin;
    const double world_h = bb.height() + 2 * margin;
    const double canvas_h = 760.0;
    const double scale = canvas_h / world_h;
    const double canvas_w = world_w * scale;
    const auto X = [&](double x) { return (x - bb.min.x + margin) * scale; };
    const auto Y = [&](double y) { return canvas_h - (y - bb.min.y + margin) * scale; };

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << detail::svg_num(canvas_w)
        << "\" height=\"" << detail::svg_num(canvas_h) << "\" viewBox=\"0 0 " << detail::svg_num(canvas_w) << ' '
        << detail::svg_num(canvas_h) << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    if (draw_cells && samples.r_min_used > 0.0) {
        svg << "<g fill=\"#fff3b0\" stroke=\"#d4b106\" stroke-width=\"0.6\" fill-opacity=\"0.55\">\n";
        for (std::size_t i = 0; i < samples.points.size(); ++i) {
            if (samples.origin_tags[i] != SampleOrigin::kTiling) continue;
            const auto cell = hexagon_cell(samples.points[i], samples.r_min_used);
            svg << "<polygon points=\"";
            for (const Point2& v : cell) svg << detail::svg_num(X(v.x)) << ',' << detail::svg_num(Y(v.y)) << ' ';
            svg << "\"/>\n";
        }
        svg << "</g>\n";
    }

    svg << "<polygon points=\"";
    for (const Point2& v : env.vertices()) svg << detail::svg_num(X(v.x)) << ',' << detail::svg_num(Y(v.y)) << ' ';
    svg << "\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1.5\"/>\n";

    if (tour_points != nullptr && tour_points->size() > 1) {
        svg << "<polyline points=\"";
        for (const Point2& p : *tour_points) svg << detail::svg_num(X(p.x)) << ',' << detail::svg_num(Y(p.y)) << ' ';
        const Point2 back = tour_points->front();
        svg << detail::svg_num(X(back.x)) << ',' << detail::svg_num(Y(back.y));
        svg << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1.2\"/>\n";
    }

    const double pr = std::max(2.0, 0.12 * samples.r_min_used * scale);
    svg << "<g stroke=\"#555555\" stroke-width=\"0.5\">\n";
    for (std::size_t i = 0; i < samples.points.size(); ++i) {
        const char* fill = "white";
        if (samples.origin_tags[i] == SampleOrigin::kProjected) fill = "#7fb3d5";
        if (samples.origin_tags[i] == SampleOrigin::kRepair) fill = "#e74c3c";
        svg << "<circle cx=\"" << detail::svg_num(X(samples.points[i].x)) << "\" cy=\""
            << detail::svg_num(Y(samples.points[i].y)) << "\" r=\"" << detail::svg_num(pr) << "\" fill=\"" << fill
            << "\"/>\n";
    }
    svg << "</g>\n</svg>\n";
    return svg.str();
}

// Multi-panel line chart (one panel per group, shared axis labels, log10 x).
struct ChartSeries {
    std::string name;
    std::vector<Point2> values;  // x, y in data units
};

struct ChartPanel {
    std::string subtitle;
    std::vector<ChartSeries> series;
};

inline std::string render_chart_svg(const std::string& title, const std::string& x_label, const std::string& y_label,
                                    const std::vector<ChartPanel>& panels) {
    const double panel_w = 360.0, panel_h = 320.0, pad_l = 64.0, pad_b = 52.0, pad_t = 56.0, pad_r = 18.0;
    const double width = (panel_w + pad_l + pad_r) * static_cast<double>(panels.size());
    const double height = panel_h + pad_t + pad_b;
    static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << detail::svg_num(width)
        << "\" height=\"" << detail::svg_num(height) << "\" viewBox=\"0 0 " << detail::svg_num(width) << ' '
        << detail::svg_num(height) << "\" font-family=\"sans-serif\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << detail::svg_num(width / 2) << "\" y=\"20\" text-anchor=\"middle\" font-size=\"15\">"
        << detail::xml_escape(title) << "</text>\n";

    for (std::size_t pi = 0; pi < panels.size(); ++pi) {
        const ChartPanel& panel = panels[pi];
        const double ox = pad_l + (panel_w + pad_l + pad_r) * static_cast<double>(pi);
        const double oy = pad_t;
        double x_lo = 1e300, x_hi = -1e300, y_lo = 0.0, y_hi = -1e300;
        for (const ChartSeries& s : panel.series) {
            for (const Point2& p : s.values) {
                x_lo = std::min(x_lo, p.x);
                x_hi = std::max(x_hi, p.x);
                y_hi = std::max(y_hi, p.y);
            }
        }
        if (x_hi <= x_lo) x_hi = x_lo + 1.0;
        if (y_hi <= y_lo) y_hi = y_lo + 1.0;
        y_hi *= 1.06;
        const double lx_lo = std::log10(std::max(1e-12, x_lo));
        const double lx_hi = std::log10(std::max(1e-12, x_hi));
        const auto X = [&](double x) { return ox + (std::log10(std::max(1e-12, x)) - lx_lo) / (lx_hi - lx_lo) * panel_w; };
        const auto Y = [&](double y) { return oy + panel_h - (y - y_lo) / (y_hi - y_lo) * panel_h; };

        svg << "<rect x=\"" << detail::svg_num(ox) << "\" y=\"" << detail::svg_num(oy) << "\" width=\""
            << detail::svg_num(panel_w) << "\" height=\"" << detail::svg_num(panel_h)
            << "\" fill=\"none\" stroke=\"#888888\"/>\n";
        svg << "<text x=\"" << detail::svg_num(ox + panel_w / 2) << "\" y=\"" << detail::svg_num(oy - 10)
            << "\" text-anchor=\"middle\" font-size=\"13\">" << detail::xml_escape(panel.subtitle) << "</text>\n";
        svg << "<text x=\"" << detail::svg_num(ox + panel_w / 2) << "\" y=\"" << detail::svg_num(oy + panel_h + 36)
            << "\" text-anchor=\"middle\" font-size=\"12\">" << detail::xml_escape(x_label) << "</text>\n";
        svg << "<text x=\"" << detail::svg_num(ox - 50) << "\" y=\"" << detail::svg_num(oy + panel_h / 2)
            << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 " << detail::svg_num(ox - 50) << ' '
            << detail::svg_num(oy + panel_h / 2) << ")\">" << detail::xml_escape(y_label) << "</text>\n";

        // x ticks at the data points of the first series; 4 y ticks
        if (!panel.series.empty()) {
            for (const Point2& p : panel.series.front().values) {
                svg << "<line x1=\"" << detail::svg_num(X(p.x)) << "\" y1=\"" << detail::svg_num(oy + panel_h)
                    << "\" x2=\"" << detail::svg_num(X(p.x)) << "\" y2=\"" << detail::svg_num(oy + panel_h + 4)
                    << "\" stroke=\"#555555\"/>\n";
            }
            const auto& first_vals = panel.series.front().values;
            for (std::size_t k = 0; k < first_vals.size(); k += std::max<std::size_t>(1, first_vals.size() / 4)) {
                char lbl[32];
                std::snprintf(lbl, sizeof(lbl), "%.0f", first_vals[k].x);
                svg << "<text x=\"" << detail::svg_num(X(first_vals[k].x)) << "\" y=\""
                    << detail::svg_num(oy + panel_h + 16) << "\" text-anchor=\"middle\" font-size=\"10\">" << lbl
                    << "</text>\n";
            }
        }
        for (int k = 0; k <= 4; ++k) {
            const double y = y_lo + (y_hi - y_lo) * k / 4.0;
            char lbl[32];
            std::snprintf(lbl, sizeof(lbl), "%.4g", y);
            svg << "<line x1=\"" << detail::svg_num(ox - 4) << "\" y1=\"" << detail::svg_num(Y(y)) << "\" x2=\""
                << detail::svg_num(ox) << "\" y2=\"" << detail::svg_num(Y(y)) << "\" stroke=\"#555555\"/>\n";
            svg << "<text x=\"" << detail::svg_num(ox - 8) << "\" y=\"" << detail::svg_num(Y(y) + 3)
                << "\" text-anchor=\"end\" font-size=\"10\">" << lbl << "</text>\n";
        }

        for (std::size_t si = 0; si < panel.series.size(); ++si) {
            const ChartSeries& s = panel.series[si];
            const char* color = kColors[si % 4];
            svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.8\" points=\"";
            for (const Point2& p : s.values) svg << detail::svg_num(X(p.x)) << ',' << detail::svg_num(Y(p.y)) << ' ';
            svg << "\"/>\n";
            for (const Point2& p : s.values) {
                svg << "<circle cx=\"" << detail::svg_num(X(p.x)) << "\" cy=\"" << detail::svg_num(Y(p.y))
                    << "\" r=\"2.4\" fill=\"" << color << "\"/>\n";
            }
            const double ly = oy + 16 + 15 * static_cast<double>(si);
            svg << "<line x1=\"" << detail::svg_num(ox + 10) << "\" y1=\"" << detail::svg_num(ly - 4) << "\" x2=\""
                << detail::svg_num(ox + 30) << "\" y2=\"" << detail::svg_num(ly - 4) << "\" stroke=\"" << color
                << "\" stroke-width=\"2\"/>\n";
            svg << "<text x=\"" << detail::svg_num(ox + 34) << "\" y=\"" << detail::svg_num(ly)
                << "\" font-size=\"11\">" << detail::xml_escape(s.name) << "</text>\n";
        }
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace fieldcover
