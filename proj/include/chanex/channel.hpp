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

#pragma once

#include "chanex/eadf.hpp"
#include "chanex/frequency_grid.hpp"
#include "chanex/path_model.hpp"

#include <armadillo>
#include <array>
#include <cstdint>
#include <optional>
#include <string>

namespace chanex {

/// Complex M x N_f transfer function with a role tag telling which stage of
/// the pipeline produced it.
struct ChannelMatrix {
    enum class Role { measured, chan, sage };

    std::size_t num_ports = 0;
    FrequencyGrid freqs;
    arma::cx_mat values; // (port, frequency)
    Role role = Role::chan;

    ChannelMatrix() = default;

    ChannelMatrix(std::size_t ports, FrequencyGrid f, Role r)
        : num_ports(ports), freqs(f), values(ports, f.count, arma::fill::zeros), role(r) {
        if (ports < 1)
            throw validation_error("ChannelMatrix: need at least one port");
    }

    void check_consistent() const {
        if (values.n_rows != num_ports || values.n_cols != freqs.count)
            throw validation_error("ChannelMatrix: dimensions inconsistent");
        if (!values.is_finite())
            throw validation_error("ChannelMatrix: non-finite values");
    }
};

std::string role_name(ChannelMatrix::Role r);
ChannelMatrix::Role role_from_name(const std::string& s);

/// Sum-of-plane-waves synthesis: values(m, f) = sum_l mask_l(m) * alpha_l *
/// a(m, phi_l, theta_l, f) * exp(-2*pi*j*f*tau_l). The one expression used
/// for both ground-truth generation and reconstruction from estimates.
ChannelMatrix synthesize_channel(const PathSet& paths, const EadfPattern& pattern,
                                 const FrequencyGrid& freqs,
                                 const PortGainMask* mask = nullptr,
                                 ChannelMatrix::Role role = ChannelMatrix::Role::chan);

/// Same model with the plane-wave inter-port phase replaced by the exact
/// spherical wavefront from a point source at the given range along each
/// path's direction. Needs the physical element positions; only meaningful
/// for synthetic geometries.
ChannelMatrix synthesize_channel_spherical(const PathSet& paths, const EadfPattern& pattern,
                                           const FrequencyGrid& freqs,
                                           const std::vector<std::array<double, 3>>& positions,
                                           double source_distance_m,
                                           const PortGainMask* mask = nullptr,
                                           ChannelMatrix::Role role = ChannelMatrix::Role::chan);

/// Adds i.i.d. circular complex Gaussian noise with per-sample variance
/// mean(|h|^2) * 10^(-snr_db/10). snr_db = +inf returns the input
/// unchanged. Deterministic given the seed.
ChannelMatrix add_awgn(const ChannelMatrix& h, double snr_db, std::uint64_t seed);

/// Applies one complex factor g_m * exp(j*psi_m) per port to all of that
/// port's spectral coefficients: g_m log-normal with the given dB sigma,
/// psi_m Gaussian with the given degree sigma. Models calibration aging.
EadfPattern perturb_pattern(const EadfPattern& e, double phase_sigma_deg,
                            double gain_sigma_db, std::uint64_t seed);

/// Mean per-sample power of h over the band (used to normalize ground
/// truth so training-band mean power is 1).
double band_mean_power(const ChannelMatrix& h, const BandSelection& band);

} // namespace chanex
