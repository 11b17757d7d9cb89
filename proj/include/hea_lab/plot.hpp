// Copyright 2026 The hea-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file
 * Minimal self-contained SVG line plots of result CSVs. Output is a pure
 * function of the input table, so identical inputs give identical bytes.
 */

#pragma once

#include "hea_lab/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <map>
#include <string>
#include <vector>

namespace hea_lab {

struct PlotSeries {
    std::string label;
    std::vector<std::pair<double, double>> points;
    bool dashed = false;
};

struct PlotSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_y = false;
    std::vector<PlotSeries> series;
};

namespace detail {

inline std::string fmt(const char *f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

inline std::string xml_escape(const std::string &s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        default: out += c;
        }
    }
    return out;
}

inline double to_double(const std::string &cell) {
    std::size_t used = 0;
    const double v = std::stod(cell, &used);
    if (used != cell.size()) throw std::invalid_argument("not a number: '" + cell + "'");
    return v;
}

} // namespace detail

inline std::string render_svg(const PlotSpec &spec) {
    constexpr double kW = 640, kH = 420, kL = 70, kR = 150, kT = 40, kB = 50;
    const char *palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    auto ty = [&](double y) { return spec.log_y ? std::log10(y) : y; };
    for (const auto &s : spec.series) {
        for (auto [x, y] : s.points) {
            if (spec.log_y && !(y > 0)) throw std::invalid_argument("render_svg: log scale needs positive values");
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, ty(y));
            ymax = std::max(ymax, ty(y));
        }
    }
    if (!std::isfinite(xmin)) throw std::invalid_argument("render_svg: no data points");
    if (xmax == xmin) xmax = xmin + 1;
    if (ymax == ymin) {
        ymin -= 0.5;
        ymax += 0.5;
    }
    const double pw = kW - kL - kR, ph = kH - kT - kB;
    auto px = [&](double x) { return kL + (x - xmin) / (xmax - xmin) * pw; };
    auto py = [&](double y) { return kT + ph - (ty(y) - ymin) / (ymax - ymin) * ph; };
    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"420\" viewBox=\"0 0 640 420\">\n";
    svg += "<rect width=\"640\" height=\"420\" fill=\"white\"/>\n";
    svg += "<text x=\"320\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">" +
           detail::xml_escape(spec.title) + "</text>\n";
    svg += "<line x1=\"70\" y1=\"370\" x2=\"490\" y2=\"370\" stroke=\"black\"/>\n";
    svg += "<line x1=\"70\" y1=\"40\" x2=\"70\" y2=\"370\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double fx = xmin + (xmax - xmin) * i / 4.0;
        const double fy = ymin + (ymax - ymin) * i / 4.0;
        const double X = kL + pw * i / 4.0;
        const double Y = kT + ph - ph * i / 4.0;
        svg += "<text x=\"" + detail::fmt("%.2f", X) + "\" y=\"388\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
               detail::fmt("%.3g", fx) + "</text>\n";
        const double label = spec.log_y ? std::pow(10.0, fy) : fy;
        svg += "<text x=\"64\" y=\"" + detail::fmt("%.2f", Y + 4) + "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" +
               detail::fmt("%.3g", label) + "</text>\n";
    }
    svg += "<text x=\"280\" y=\"410\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" +
           detail::xml_escape(spec.x_label) + "</text>\n";
    svg += "<text x=\"16\" y=\"205\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" transform=\"rotate(-90 16 205)\">" +
           detail::xml_escape(spec.y_label) + (spec.log_y ? " (log)" : "") + "</text>\n";
    for (std::size_t i = 0; i < spec.series.size(); ++i) {
        const auto &s = spec.series[i];
        const char *color = palette[i % 8];
        std::string pts;
        for (auto [x, y] : s.points) {
            if (!pts.empty()) pts += ' ';
            pts += detail::fmt("%.2f", px(x)) + "," + detail::fmt("%.2f", py(y));
        }
        svg += std::string("<polyline fill=\"none\" stroke=\"") + color + "\" stroke-width=\"1.5\"" +
               (s.dashed ? " stroke-dasharray=\"5,3\"" : "") + " points=\"" + pts + "\"/>\n";
        const double ly = kT + 14.0 * static_cast<double>(i) + 6;
        svg += std::string("<line x1=\"500\" y1=\"") + detail::fmt("%.2f", ly) + "\" x2=\"520\" y2=\"" +
               detail::fmt("%.2f", ly) + "\" stroke=\"" + color + "\"/>\n";
        svg += "<text x=\"525\" y=\"" + detail::fmt("%.2f", ly + 4) + "\" font-family=\"sans-serif\" font-size=\"11\">" +
               detail::xml_escape(s.label) + "</text>\n";
    }
    svg += "</svg>\n";
    return svg;
}

/// Plot description for a result table of the given kind.
///
/// numerics: one series per n of mean_grad_inf_norm against t.
/// gde-sff:  per k, the empirical mean (solid) and prediction (dashed).
inline PlotSpec plot_spec_for(const Table &table, const std::string &kind, bool log_y) {
    auto need = [&](const char *name) {
        const int c = table.column(name);
        if (c < 0) throw std::invalid_argument("emit_plot: " + kind + " CSV lacks column '" + name + "'");
        return static_cast<std::size_t>(c);
    };
    if (table.rows.empty()) throw std::invalid_argument("emit_plot: no data rows");
    PlotSpec spec;
    spec.log_y = log_y;
    auto grouped = [&](std::size_t key_col, std::size_t x_col, std::size_t y_col, const std::string &prefix,
                       bool dashed) {
        std::vector<std::string> order;
        std::map<std::string, PlotSeries> by_key;
        for (const auto &row : table.rows) {
            const std::string &key = row[key_col];
            if (!by_key.count(key)) {
                order.push_back(key);
                by_key[key].label = prefix + key;
                by_key[key].dashed = dashed;
            }
            by_key[key].points.emplace_back(detail::to_double(row[x_col]), detail::to_double(row[y_col]));
        }
        for (const auto &k : order) spec.series.push_back(by_key[k]);
    };
    if (kind == "numerics") {
        spec.title = "Mean gradient norm vs evolution time";
        spec.x_label = "t";
        spec.y_label = "mean ||grad L||_inf";
        grouped(need("n"), need("t"), need("mean_grad_inf_norm"), "n=", false);
    } else if (kind == "gde-sff") {
        spec.title = "GDE spectral form factor";
        spec.x_label = "t";
        spec.y_label = "c_2k(t)";
        const std::size_t k = need("k"), t = need("t");
        grouped(k, t, need("empirical_mean"), "k=", false);
        grouped(k, t, need("analytic"), "analytic k=", true);
    } else {
        throw std::invalid_argument("emit_plot: unknown plot kind '" + kind + "'");
    }
    return spec;
}

/// Renders `csv_path` as SVG next to it (same stem, .svg) and returns the
/// output path. Nothing is written on error.
inline std::filesystem::path emit_plot(const std::filesystem::path &csv_path, const std::string &kind,
                                       bool log_y = false) {
    const Table table = parse_csv(read_file(csv_path));
    const std::string svg = render_svg(plot_spec_for(table, kind, log_y));
    std::filesystem::path out = csv_path;
    out.replace_extension(".svg");
    write_file_atomic(out, svg);
    return out;
}

} // namespace hea_lab
