// SPDX-License-Identifier: Apache-2.0
//
// chanex — SIMO channel synthesis, multipath parameter estimation, and
// frequency-band extrapolation for calibrated antenna arrays
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

#include "chanex/svg.hpp"

#include <algorithm>
#include <cstdio>

namespace chanex {

namespace {

constexpr double width = 960.0, height = 540.0;
constexpr double ml = 70.0, mr = 160.0, mt = 40.0, mb = 50.0;

const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                         "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

double cap(double v) {
    if (std::isnan(v))
        return 0.0;
    return std::clamp(v, -200.0, 200.0);
}

template <typename... Args>
std::string fmt(const char* pattern, Args... args) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), pattern, args...);
    return buf;
}

} // namespace

std::string render_line_plot(const std::string& title, const FrequencyGrid& freqs,
                             const BandSelection& band,
                             const std::vector<PlotSeries>& series,
                             const std::string& y_label) {
    if (series.empty())
        throw validation_error("render_line_plot: no series to plot");
    for (const auto& s : series)
        if (s.values_db.size() != freqs.count)
            throw validation_error("render_line_plot: series length does not match grid");

    double lo = 1e300, hi = -1e300;
    for (const auto& s : series)
        for (double v : s.values_db) {
            const double c = cap(v);
            lo = std::min(lo, c);
            hi = std::max(hi, c);
        }
    if (lo > hi) {
        lo = -1.0;
        hi = 1.0;
    }
    const double pad = std::max(0.05 * (hi - lo), 0.5);
    lo -= pad;
    hi += pad;

    const double pw = width - ml - mr, ph = height - mt - mb;
    const double f0 = freqs.start_hz, f1 = freqs.last_hz();
    const auto xpos = [&](double f) { return ml + pw * (f - f0) / std::max(f1 - f0, 1.0); };
    const auto ypos = [&](double v) { return mt + ph * (hi - cap(v)) / (hi - lo); };

    std::string out;
    out += fmt("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%g\" height=\"%g\" "
               "viewBox=\"0 0 %g",
               width, height, width);
    out += fmt(" %g\">\n", height);
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    // shaded training band
    const double bx0 = xpos(freqs.freq_hz(band.start_index));
    const double bx1 = xpos(freqs.freq_hz(band.start_index + band.count - 1));
    out += fmt("<rect x=\"%g\" y=\"", bx0);
    out += fmt("%g\" ", mt);
    out += fmt("width=\"%g\" height=\"%g\" fill=\"#d9d9d9\" opacity=\"0.6\"/>\n", bx1 - bx0, ph);

    // axes and ticks
    out += fmt("<rect x=\"%g\" y=\"%g\" ", ml, mt);
    out += fmt("width=\"%g\" height=\"%g\" fill=\"none\" stroke=\"black\"/>\n", pw, ph);
    for (int t = 0; t <= 6; ++t) {
        const double f = f0 + (f1 - f0) * t / 6.0;
        const double x = xpos(f);
        out += fmt("<line x1=\"%g\" x2=\"%g\" ", x, x);
        out += fmt("y1=\"%g\" y2=\"%g\" stroke=\"black\"/>\n", mt + ph, mt + ph + 5.0);
        out += fmt("<text x=\"%g\" y=\"%g\" font-size=\"12\" text-anchor=\"middle\">", x,
                   mt + ph + 20.0);
        out += fmt("%.4f</text>\n", f / 1e9);

        const double v = lo + (hi - lo) * t / 6.0;
        const double y = ypos(v);
        out += fmt("<line x1=\"%g\" x2=\"%g\" ", ml - 5.0, ml);
        out += fmt("y1=\"%g\" y2=\"%g\" stroke=\"black\"/>\n", y, y);
        out += fmt("<text x=\"%g\" y=\"%g\" font-size=\"12\" text-anchor=\"end\">", ml - 8.0,
                   y + 4.0);
        out += fmt("%.1f</text>\n", v);
    }
    out += fmt("<text x=\"%g\" y=\"%g\" font-size=\"14\" text-anchor=\"middle\">",
               ml + pw / 2.0, height - 12.0);
    out += "frequency [GHz]</text>\n";
    out += fmt("<text x=\"18\" y=\"%g\" font-size=\"14\" text-anchor=\"middle\" "
               "transform=\"rotate(-90 18 %g)\">",
               mt + ph / 2.0, mt + ph / 2.0);
    out += y_label + "</text>\n";
    out += fmt("<text x=\"%g\" y=\"%g\" font-size=\"16\" text-anchor=\"middle\">",
               ml + pw / 2.0, mt - 14.0);
    out += title + "</text>\n";

    // data
    for (std::size_t si = 0; si < series.size(); ++si) {
        const char* color = palette[si % (sizeof(palette) / sizeof(palette[0]))];
        std::string pts;
        for (std::size_t fi = 0; fi < freqs.count; ++fi) {
            pts += fmt("%.2f,%.2f ", xpos(freqs.freq_hz(fi)), ypos(series[si].values_db[fi]));
        }
        if (!pts.empty())
            pts.pop_back();
        out += "<polyline fill=\"none\" stroke=\"";
        out += color;
        out += "\" stroke-width=\"1.2\" points=\"" + pts + "\"/>\n";

        const double ly = mt + 18.0 + 18.0 * static_cast<double>(si);
        out += fmt("<line x1=\"%g\" x2=\"%g\" ", width - mr + 10.0, width - mr + 34.0);
        out += fmt("y1=\"%g\" y2=\"%g\" stroke=\"", ly - 4.0, ly - 4.0);
        out += color;
        out += "\" stroke-width=\"2\"/>\n";
        out += fmt("<text x=\"%g\" y=\"%g\" font-size=\"12\">", width - mr + 40.0, ly);
        out += series[si].label + "</text>\n";
    }

    out += "</svg>\n";
    return out;
}

} // namespace chanex
