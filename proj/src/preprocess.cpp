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

#include "chanex/preprocess.hpp"

namespace chanex {

ChannelMatrix compensate_b2b(const ChannelMatrix& h_meas, const B2bResponse& b2b) {
    h_meas.check_consistent();
    b2b.check_consistent();
    if (!h_meas.freqs.same_as(b2b.freqs))
        throw validation_error("compensate_b2b: frequency grids differ");
    for (std::size_t fi = 0; fi < b2b.values.n_elem; ++fi)
        if (std::abs(b2b.values[fi]) < 1e-12)
            throw numeric_error("compensate_b2b: back-to-back response not invertible");

    ChannelMatrix out = h_meas;
    for (std::size_t fi = 0; fi < out.values.n_cols; ++fi)
        out.values.col(fi) /= b2b.values[fi];
    out.role = ChannelMatrix::Role::chan;
    return out;
}

ChannelMatrix apply_b2b(const ChannelMatrix& h, const B2bResponse& b2b) {
    h.check_consistent();
    b2b.check_consistent();
    if (!h.freqs.same_as(b2b.freqs))
        throw validation_error("apply_b2b: frequency grids differ");
    ChannelMatrix out = h;
    for (std::size_t fi = 0; fi < out.values.n_cols; ++fi)
        out.values.col(fi) *= b2b.values[fi];
    out.role = ChannelMatrix::Role::measured;
    return out;
}

ChannelMatrix select_band(const ChannelMatrix& h, const BandSelection& sel) {
    h.check_consistent();
    sel.check_within(h.freqs);
    ChannelMatrix out(h.num_ports, h.freqs.subgrid(sel.start_index, sel.count), h.role);
    out.values = h.values.cols(sel.start_index, sel.start_index + sel.count - 1);
    return out;
}

B2bResponse synthetic_b2b(const FrequencyGrid& freqs, std::uint64_t seed) {
    constexpr int order = 5;
    constexpr double max_log_ripple = 0.17; // +-1.5 dB about unity, 3 dB total
    Rng rng(derive_seed(seed, 0xb2b));

    arma::vec re(order), im(order);
    for (int k = 0; k < order; ++k) {
        re[k] = rng.uniform(-1.0, 1.0);
        im[k] = rng.uniform(-0.3, 0.3);
    }

    B2bResponse b;
    b.freqs = freqs;
    b.values.set_size(freqs.count);
    const double f0 = freqs.start_hz;
    const double span = std::max(freqs.span_hz(), freqs.step_hz);

    // scale the real (log-magnitude) part so the ripple cap holds
    double max_re = 0.0;
    for (std::size_t fi = 0; fi < freqs.count; ++fi) {
        const double x = 2.0 * (freqs.freq_hz(fi) - f0) / span - 1.0;
        double p = 0.0, xp = x;
        for (int k = 0; k < order; ++k, xp *= x)
            p += re[k] * xp;
        max_re = std::max(max_re, std::abs(p));
    }
    const double re_scale = max_re > max_log_ripple ? max_log_ripple / max_re : 1.0;

    for (std::size_t fi = 0; fi < freqs.count; ++fi) {
        const double x = 2.0 * (freqs.freq_hz(fi) - f0) / span - 1.0;
        double pr = 0.0, pi_ = 0.0, xp = x;
        for (int k = 0; k < order; ++k, xp *= x) {
            pr += re[k] * xp;
            pi_ += im[k] * xp;
        }
        b.values[fi] = std::polar(std::exp(re_scale * pr), pi_);
    }
    return b;
}

} // namespace chanex
