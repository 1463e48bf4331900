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

#include "chanex/metrics.hpp"

#include <cstdio>
#include <limits>

namespace chanex {

namespace {

void check_pair(const ChannelMatrix& a, const ChannelMatrix& b, std::size_t f_index) {
    if (a.num_ports != b.num_ports)
        throw validation_error("metrics: port counts differ");
    if (!a.freqs.same_as(b.freqs))
        throw validation_error("metrics: frequency grids differ");
    if (f_index >= a.freqs.count)
        throw std::out_of_range("metrics: frequency index out of range");
}

constexpr double db_cap = 200.0;

double cap_db(double v) {
    if (std::isinf(v))
        return v > 0.0 ? db_cap : -db_cap;
    return v;
}

} // namespace

double mse_at(const ChannelMatrix& h_chan, const ChannelMatrix& h_sage, std::size_t f_index) {
    check_pair(h_chan, h_sage, f_index);
    double acc = 0.0;
    for (std::size_t m = 0; m < h_chan.num_ports; ++m) {
        const cx d = h_chan.values(m, f_index) - h_sage.values(m, f_index);
        acc += std::norm(d);
    }
    return acc / static_cast<double>(h_chan.num_ports);
}

double rbg_at(const ChannelMatrix& h_chan, const ChannelMatrix& h_sage, std::size_t f_index) {
    check_pair(h_chan, h_sage, f_index);
    double p_sage = 0.0, p_chan = 0.0;
    cx inner(0.0, 0.0);
    for (std::size_t m = 0; m < h_chan.num_ports; ++m) {
        const cx s = h_sage.values(m, f_index);
        const cx c = h_chan.values(m, f_index);
        p_sage += std::norm(s);
        p_chan += std::norm(c);
        inner += std::conj(s) * c;
    }
    if (p_sage <= 0.0 || p_chan <= 0.0)
        throw numeric_error("rbg_at: zero-norm channel vector");
    const double denom = std::norm(inner);
    if (denom == 0.0)
        return std::numeric_limits<double>::infinity();
    double r = (p_sage * p_chan) / denom;
    if (r < 1.0 - 1e-12)
        throw numeric_error("rbg_at: value below the Cauchy-Schwarz floor");
    return std::max(r, 1.0);
}

double array_gain(const ChannelMatrix& h_sage, const ChannelMatrix& h_chan,
                  std::size_t f_index) {
    check_pair(h_chan, h_sage, f_index);
    double p_sage = 0.0, p_chan = 0.0;
    cx inner(0.0, 0.0);
    for (std::size_t m = 0; m < h_chan.num_ports; ++m) {
        const cx s = h_sage.values(m, f_index);
        const cx c = h_chan.values(m, f_index);
        p_sage += std::norm(s);
        p_chan += std::norm(c);
        inner += std::conj(s) * c;
    }
    if (p_sage <= 0.0 || p_chan <= 0.0)
        throw numeric_error("array_gain: zero-norm channel vector");
    const double mean_chan = p_chan / static_cast<double>(h_chan.num_ports);
    return std::norm(inner) / (p_sage * mean_chan);
}

MetricSeries sweep(const ChannelMatrix& h_chan, const ChannelMatrix& h_sage,
                   const BandSelection& training_band) {
    check_pair(h_chan, h_sage, 0);
    training_band.check_within(h_chan.freqs);
    MetricSeries s;
    s.freqs = h_chan.freqs;
    s.training_band = training_band;
    s.mse_db.resize(h_chan.freqs.count);
    s.rbg_db.resize(h_chan.freqs.count);
    for (std::size_t fi = 0; fi < h_chan.freqs.count; ++fi) {
        s.mse_db[fi] = to_db(mse_at(h_chan, h_sage, fi));
        s.rbg_db[fi] = to_db(rbg_at(h_chan, h_sage, fi));
    }
    return s;
}

std::string metrics_to_csv(const MetricSeries& s) {
    std::string out = "freq_hz,mse_db,rbg_db,in_training_band\n";
    char line[128];
    for (std::size_t fi = 0; fi < s.freqs.count; ++fi) {
        const int in_band = s.training_band.contains(fi) ? 1 : 0;
        std::snprintf(line, sizeof(line), "%.9g,%.9g,%.9g,%d\n", s.freqs.freq_hz(fi),
                      cap_db(s.mse_db[fi]), cap_db(s.rbg_db[fi]), in_band);
        out += line;
    }
    return out;
}

} // namespace chanex
