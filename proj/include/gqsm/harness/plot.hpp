// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The gqsm-capacity Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

// SVG line plots of result CSVs: SNR in dB against bits.
//
// Rows are grouped into series by (experiment, scheme, design_method,
// density_method, n_inner). Each series draws its total as a solid line; a
// series with a nonzero I_A anywhere also draws I_s dashed and I_A dotted.

#include <gqsm/harness/csv.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iterator>
#include <map>
#include <string>
#include <tuple>
#include <vector>

namespace gqsm::harness {

struct PlotCurve {
    std::string label;
    std::string dash; ///< SVG stroke-dasharray, empty for solid
    std::vector<std::pair<double, double>> points;
};

/// Groups rows into curves. Points within a curve are sorted by SNR.
inline std::vector<PlotCurve> plot_curves(const std::vector<ResultRow>& rows) {
    using Key = std::tuple<std::string, std::string, std::string, std::string, std::uint64_t>;
    std::vector<Key> order;
    std::map<Key, std::vector<const ResultRow*>> groups;
    for (const auto& r : rows) {
        Key key{r.experiment, r.scheme, r.design_method, r.density_method, r.n_inner};
        auto [it, inserted] = groups.try_emplace(key);
        if (inserted) order.push_back(key);
        it->second.push_back(&r);
    }
    std::vector<PlotCurve> out;
    for (const auto& key : order) {
        auto members = groups[key];
        std::stable_sort(members.begin(), members.end(),
                         [](const ResultRow* a, const ResultRow* b) { return a->snr_db < b->snr_db; });
        const auto& [experiment, scheme, design, density, n_inner] = key;
        std::string label = scheme + " " + design;
        if (density != "closed") label += " " + density;
        if (n_inner > 0) label += " N=" + std::to_string(n_inner);

        PlotCurve total{label, "", {}}, is{label + " I_s", "8 4", {}}, ia{label + " I_A", "2 3", {}};
        bool has_a = false;
        for (const ResultRow* r : members) {
            total.points.emplace_back(r->snr_db, r->i_total);
            is.points.emplace_back(r->snr_db, r->i_s);
            ia.points.emplace_back(r->snr_db, r->i_a);
            has_a = has_a || r->i_a != 0.0;
        }
        out.push_back(std::move(total));
        if (has_a) {
            out.push_back(std::move(is));
            out.push_back(std::move(ia));
        }
    }
    return out;
}

namespace detail {

/// Round step (1, 2 or 5 times a power of ten) giving about `target` ticks.
inline double nice_step(double span, int target) {
    const double raw = span / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    for (double f : {1.0, 2.0, 5.0, 10.0})
        if (raw <= f * mag) return f * mag;
    return 10.0 * mag;
}

inline std::string escape_xml(std::string_view s) {
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

inline std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

inline std::string tick_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", std::abs(v) < 1e-12 ? 0.0 : v);
    return buf;
}

} // namespace detail

/// Renders curves as an SVG document.
inline std::string render_svg(const std::vector<PlotCurve>& curves, std::string_view title = "") {
    if (curves.empty()) throw ParseError(0, "nothing to plot");
    constexpr double width = 800, height = 520, left = 70, right = 230, top = 40, bottom = 60;
    const double pw = width - left - right, ph = height - top - bottom;

    double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
    for (const auto& c : curves)
        for (const auto& [x, y] : c.points) {
            x0 = std::min(x0, x);
            x1 = std::max(x1, x);
            y0 = std::min(y0, y);
            y1 = std::max(y1, y);
        }
    if (x1 - x0 < 1e-12) {
        x0 -= 1.0;
        x1 += 1.0;
    }
    if (y1 - y0 < 1e-12) {
        y0 -= 0.5;
        y1 += 0.5;
    }
    const double ys = detail::nice_step(y1 - y0, 6);
    y0 = std::floor(y0 / ys) * ys;
    y1 = std::ceil(y1 / ys) * ys;
    const double xs = detail::nice_step(x1 - x0, 8);

    auto px = [&](double x) { return left + (x - x0) / (x1 - x0) * pw; };
    auto py = [&](double y) { return top + (1.0 - (y - y0) / (y1 - y0)) * ph; };

    static constexpr const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                              "#ff7f0e", "#17becf", "#8c564b", "#e377c2"};
    using detail::fmt;
    std::string s;
    s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(width) + "\" height=\"" + fmt(height) +
         "\" viewBox=\"0 0 " + fmt(width) + " " + fmt(height) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!title.empty())
        s += "<text x=\"" + fmt(left + pw / 2) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" +
             detail::escape_xml(title) + "</text>\n";

    // Grid and ticks.
    for (double t = std::ceil(x0 / xs) * xs; t <= x1 + 1e-9 * xs; t += xs) {
        s += "<line x1=\"" + fmt(px(t)) + "\" y1=\"" + fmt(top) + "\" x2=\"" + fmt(px(t)) + "\" y2=\"" +
             fmt(top + ph) + "\" stroke=\"#ddd\"/>\n";
        s += "<text x=\"" + fmt(px(t)) + "\" y=\"" + fmt(top + ph + 18) + "\" text-anchor=\"middle\">" +
             detail::tick_label(t) + "</text>\n";
    }
    for (double t = y0; t <= y1 + 1e-9 * ys; t += ys) {
        s += "<line x1=\"" + fmt(left) + "\" y1=\"" + fmt(py(t)) + "\" x2=\"" + fmt(left + pw) + "\" y2=\"" +
             fmt(py(t)) + "\" stroke=\"#ddd\"/>\n";
        s += "<text x=\"" + fmt(left - 8) + "\" y=\"" + fmt(py(t) + 4) + "\" text-anchor=\"end\">" +
             detail::tick_label(t) + "</text>\n";
    }
    s += "<rect x=\"" + fmt(left) + "\" y=\"" + fmt(top) + "\" width=\"" + fmt(pw) + "\" height=\"" + fmt(ph) +
         "\" fill=\"none\" stroke=\"black\"/>\n";
    s += "<text x=\"" + fmt(left + pw / 2) + "\" y=\"" + fmt(height - 18) +
         "\" text-anchor=\"middle\">SNR [dB]</text>\n";
    s += "<text transform=\"translate(20 " + fmt(top + ph / 2) +
         ") rotate(-90)\" text-anchor=\"middle\">AMI [bits]</text>\n";

    // Curves, markers and legend.
    std::size_t colour = 0;
    for (std::size_t i = 0; i < curves.size(); ++i) {
        const auto& c = curves[i];
        if (c.dash.empty() && i > 0) ++colour;
        const char* stroke = palette[colour % std::size(palette)];
        std::string pts;
        for (const auto& [x, y] : c.points) pts += fmt(px(x)) + "," + fmt(py(y)) + " ";
        if (!pts.empty()) pts.pop_back();
        s += "<g class=\"curve\" stroke=\"" + std::string(stroke) + "\">\n";
        s += "<title>" + detail::escape_xml(c.label) + "</title>\n";
        s += "<polyline fill=\"none\" stroke-width=\"1.8\" points=\"" + pts + "\"";
        if (!c.dash.empty()) s += " stroke-dasharray=\"" + c.dash + "\"";
        s += "/>\n";
        for (const auto& [x, y] : c.points)
            s += "<circle cx=\"" + fmt(px(x)) + "\" cy=\"" + fmt(py(y)) + "\" r=\"3\" fill=\"" + stroke + "\"/>\n";
        s += "</g>\n";

        const double ly = top + 10 + 18.0 * static_cast<double>(i);
        const double lx = left + pw + 12;
        s += "<line x1=\"" + fmt(lx) + "\" y1=\"" + fmt(ly) + "\" x2=\"" + fmt(lx + 28) + "\" y2=\"" + fmt(ly) +
             "\" stroke=\"" + stroke + "\" stroke-width=\"1.8\"";
        if (!c.dash.empty()) s += " stroke-dasharray=\"" + c.dash + "\"";
        s += "/>\n";
        s += "<text x=\"" + fmt(lx + 34) + "\" y=\"" + fmt(ly + 4) + "\">" + detail::escape_xml(c.label) +
             "</text>\n";
    }
    s += "</svg>\n";
    return s;
}

/// Reads a result CSV and writes its plot. A CSV without data rows is an
/// error and leaves out_svg untouched.
inline void emit_plot(const std::string& csv_path, const std::string& out_svg) {
    const auto rows = parse_result_csv(read_text(csv_path));
    if (rows.empty()) throw ParseError(1, "'" + csv_path + "' has no data rows");
    write_text(out_svg, render_svg(plot_curves(rows), rows.front().experiment));
}

} // namespace gqsm::harness
