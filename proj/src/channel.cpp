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

#include "chanex/channel.hpp"

namespace chanex {

std::string role_name(ChannelMatrix::Role r) {
    switch (r) {
    case ChannelMatrix::Role::measured:
        return "measured";
    case ChannelMatrix::Role::chan:
        return "chan";
    case ChannelMatrix::Role::sage:
        return "sage";
    }
    return "chan";
}

ChannelMatrix::Role role_from_name(const std::string& s) {
    if (s == "measured")
        return ChannelMatrix::Role::measured;
    if (s == "chan")
        return ChannelMatrix::Role::chan;
    if (s == "sage")
        return ChannelMatrix::Role::sage;
    throw validation_error("unknown channel role: " + s);
}

namespace {

// calibration index range bracketing the full grid span
std::pair<std::size_t, std::size_t> calib_range(const EadfPattern& pattern,
                                                const FrequencyGrid& freqs) {
    if (pattern.freqs.count == 1) {
        constexpr double slack = 1e-3;
        if (std::abs(freqs.start_hz - pattern.freqs.start_hz) > slack ||
            std::abs(freqs.last_hz() - pattern.freqs.start_hz) > slack)
            throw std::out_of_range("frequency grid outside pattern calibration span");
        return {0, 0};
    }
    const auto lo = bracket(pattern.freqs, freqs.start_hz);
    const auto hi = bracket(pattern.freqs, freqs.last_hz());
    return {lo.first, hi.first + 1};
}

void accumulate_path(ChannelMatrix& h, const PathSet& paths, std::size_t l,
                     const EadfPattern& pattern, const PortGainMask* mask,
                     const arma::cx_mat& port_gains, std::size_t k0) {
    const auto& path = paths.paths[l];
    const std::size_t M = h.num_ports;
    const bool masked = mask != nullptr && mask->applies_to_path(l);

    arma::cx_vec a(M);
    for (std::size_t fi = 0; fi < h.freqs.count; ++fi) {
        const double f = h.freqs.freq_hz(fi);
        if (pattern.freqs.count == 1) {
            a = port_gains.col(0);
        } else {
            const auto [k, w] = bracket(pattern.freqs, f);
            a = (1.0 - w) * port_gains.col(k - k0) + w * port_gains.col(k - k0 + 1);
        }
        const cx rot = path.alpha * std::polar(1.0, -2.0 * pi * f * path.tau_s);
        for (std::size_t m = 0; m < M; ++m) {
            cx v = rot * a[m];
            if (masked)
                v *= mask->port_gain[m];
            h.values(m, fi) += v;
        }
    }
}

} // namespace

ChannelMatrix synthesize_channel(const PathSet& paths, const EadfPattern& pattern,
                                 const FrequencyGrid& freqs, const PortGainMask* mask,
                                 ChannelMatrix::Role role) {
    paths.validate();
    if (mask != nullptr)
        mask->validate(pattern.num_ports, paths.size());
    ChannelMatrix h(pattern.num_ports, freqs, role);
    if (paths.empty())
        return h;
    const auto [k0, k1] = calib_range(pattern, freqs);

    for (std::size_t l = 0; l < paths.size(); ++l) {
        const auto& path = paths.paths[l];
        const arma::cx_mat port_gains =
            eadf_eval_ports(pattern, path.phi_rad, path.theta_rad, k0, k1);
        accumulate_path(h, paths, l, pattern, mask, port_gains, k0);
    }
    return h;
}

ChannelMatrix synthesize_channel_spherical(const PathSet& paths, const EadfPattern& pattern,
                                           const FrequencyGrid& freqs,
                                           const std::vector<std::array<double, 3>>& positions,
                                           double source_distance_m, const PortGainMask* mask,
                                           ChannelMatrix::Role role) {
    paths.validate();
    if (!(source_distance_m > 0.0))
        throw validation_error("spherical synthesis: source distance must be > 0");
    if (positions.size() != pattern.num_ports)
        throw validation_error("spherical synthesis: element position count mismatch");
    if (mask != nullptr)
        mask->validate(pattern.num_ports, paths.size());

    ChannelMatrix h(pattern.num_ports, freqs, role);
    if (paths.empty())
        return h;
    const auto [k0, k1] = calib_range(pattern, freqs);
    const double R = source_distance_m;
    const std::size_t M = pattern.num_ports;

    for (std::size_t l = 0; l < paths.size(); ++l) {
        const auto& path = paths.paths[l];
        const bool masked = mask != nullptr && mask->applies_to_path(l);
        const arma::cx_mat port_gains =
            eadf_eval_ports(pattern, path.phi_rad, path.theta_rad, k0, k1);
        const auto k_dir = direction_unit_vector(path.phi_rad, path.theta_rad);

        // excess distance per port relative to the plane-wave phase already
        // baked into the pattern, plus the 1/d amplitude taper
        arma::vec excess(M), taper(M);
        for (std::size_t m = 0; m < M; ++m) {
            const auto& p = positions[m];
            const double dx = R * k_dir[0] - p[0];
            const double dy = R * k_dir[1] - p[1];
            const double dz = R * k_dir[2] - p[2];
            const double d = std::sqrt(dx * dx + dy * dy + dz * dz);
            const double proj = k_dir[0] * p[0] + k_dir[1] * p[1] + k_dir[2] * p[2];
            excess[m] = d - R + proj;
            taper[m] = R / d;
        }

        arma::cx_vec a(M);
        for (std::size_t fi = 0; fi < freqs.count; ++fi) {
            const double f = freqs.freq_hz(fi);
            if (pattern.freqs.count == 1) {
                a = port_gains.col(0);
            } else {
                const auto [k, w] = bracket(pattern.freqs, f);
                a = (1.0 - w) * port_gains.col(k - k0) + w * port_gains.col(k - k0 + 1);
            }
            const cx rot = path.alpha * std::polar(1.0, -2.0 * pi * f * path.tau_s);
            for (std::size_t m = 0; m < M; ++m) {
                cx v = rot * a[m] * std::polar(taper[m], -2.0 * pi * f * excess[m] /
                                                             speed_of_light);
                if (masked)
                    v *= mask->port_gain[m];
                h.values(m, fi) += v;
            }
        }
    }
    return h;
}

ChannelMatrix add_awgn(const ChannelMatrix& h, double snr_db, std::uint64_t seed) {
    h.check_consistent();
    if (std::isinf(snr_db) && snr_db > 0.0)
        return h;
    if (!std::isfinite(snr_db))
        throw validation_error("add_awgn: snr_db must be finite or +inf");
    const double mean_power =
        arma::accu(arma::square(arma::abs(h.values))) / static_cast<double>(h.values.n_elem);
    if (mean_power <= 0.0)
        throw validation_error("add_awgn: all-zero channel, SNR undefined");
    const double sigma = std::sqrt(mean_power * std::pow(10.0, -snr_db / 10.0));

    ChannelMatrix out = h;
    Rng rng(seed);
    // column-major walk matches arma storage order
    for (std::size_t fi = 0; fi < out.values.n_cols; ++fi)
        for (std::size_t m = 0; m < out.values.n_rows; ++m)
            out.values(m, fi) += sigma * rng.cnormal();
    return out;
}

EadfPattern perturb_pattern(const EadfPattern& e, double phase_sigma_deg,
                            double gain_sigma_db, std::uint64_t seed) {
    if (phase_sigma_deg < 0.0 || gain_sigma_db < 0.0)
        throw validation_error("perturb_pattern: sigmas must be >= 0");
    if (phase_sigma_deg == 0.0 && gain_sigma_db == 0.0)
        return e;
    EadfPattern out = e;
    Rng rng(seed);
    for (std::size_t m = 0; m < e.num_ports; ++m) {
        const double gain_db = gain_sigma_db * rng.normal();
        const double psi = deg2rad(phase_sigma_deg * rng.normal());
        const cx factor = std::polar(std::pow(10.0, gain_db / 20.0), psi);
        for (std::size_t k = 0; k < e.freqs.count; ++k)
            out.coeff(m, k) *= factor;
    }
    return out;
}

double band_mean_power(const ChannelMatrix& h, const BandSelection& band) {
    band.check_within(h.freqs);
    const arma::cx_mat sub =
        h.values.cols(band.start_index, band.start_index + band.count - 1);
    return arma::accu(arma::square(arma::abs(sub))) / static_cast<double>(sub.n_elem);
}

} // namespace chanex
