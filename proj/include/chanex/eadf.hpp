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

#include "chanex/array_pattern.hpp"

#include <armadillo>
#include <cstddef>

namespace chanex {

/// How the pattern was made periodic in elevation before the 2-D DFT.
enum class ElevationPeriodification {
    /// theta -> 360 - theta with azimuth shifted by 180 deg: the physical
    /// continuation of a wave over the poles. The periodified elevation
    /// coordinate then equals theta itself (period 2*pi).
    MirrorWithAzimuthShift,
};

/// Spectral (aperture-domain) form of an ArrayPattern: one 2-D harmonic
/// coefficient matrix per (port, calibration frequency). Evaluating the
/// harmonic series gives exact trigonometric interpolation in both angles;
/// frequency is interpolated linearly between calibration points.
struct EadfPattern {
    std::size_t num_ports = 0;
    AngleGrid angles; // original calibration grid (for reference/round trips)
    FrequencyGrid freqs;
    std::size_t n_az = 0;  // azimuth harmonic count
    std::size_t n_el2 = 0; // periodified elevation harmonic count = 2*(n_el-1)
    ElevationPeriodification periodification =
        ElevationPeriodification::MirrorWithAzimuthShift;
    arma::field<arma::cx_mat> coeff; // (num_ports x freqs.count), each (n_az x n_el2)

    EadfPattern(std::size_t ports, AngleGrid ang, FrequencyGrid f)
        : num_ports(ports), angles(std::move(ang)), freqs(f) {}
};

/// 2-D DFT of the periodified pattern, per port per calibration frequency.
/// Requires an even azimuth node count (the mirror copy is shifted by half
/// the circle). Rejects non-finite gains and inconsistent dimensions.
EadfPattern eadf_from_pattern(const ArrayPattern& p);

/// Harmonic synthesis basis for one axis: entry idx carries
/// exp(j * mu * angle) with mu the signed FFT harmonic of idx; for even n
/// the Nyquist bin is split symmetrically, i.e. cos(n/2 * angle), which
/// keeps node values exact and off-grid synthesis non-oscillatory.
arma::cx_vec eadf_basis(std::size_t n, double angle_rad);

/// Gain of port m at (phi, theta, f). Angles via harmonic synthesis
/// (exact trigonometric interpolation), frequency linear between the two
/// bracketing calibration points. Throws std::out_of_range if f lies
/// outside the calibration span — patterns are never extrapolated in
/// frequency.
cx evaluate_pattern(const EadfPattern& e, std::size_t m, double phi_rad, double theta_rad,
                    double f_hz);

/// All ports at one angle over the calibration index range [k0, k1]
/// inclusive; returns (num_ports x (k1-k0+1)). The batched form behind
/// evaluate_pattern, shared by synthesis, estimation, and test oracles.
arma::cx_mat eadf_eval_ports(const EadfPattern& e, double phi_rad, double theta_rad,
                             std::size_t k0, std::size_t k1);

/// phi normalized into [0, 2*pi); theta checked against [0, pi] with a
/// tiny slack and clamped.
double normalize_azimuth(double phi_rad);
double check_polar(double theta_rad);

} // namespace chanex
