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

#include "chanex/angle_grid.hpp"
#include "chanex/frequency_grid.hpp"

#include <armadillo>
#include <array>
#include <cstddef>
#include <vector>

namespace chanex {

/// Complex port radiation patterns a(m, phi, theta, f) sampled on a
/// calibration grid: one cube per port, indexed (azimuth, elevation,
/// frequency). Pure value type; safe for concurrent reads.
struct ArrayPattern {
    std::size_t num_ports = 0;
    AngleGrid angles;
    FrequencyGrid freqs;
    std::vector<arma::cx_cube> gains; // gains[m](i_az, i_el, i_f)

    ArrayPattern(std::size_t ports, AngleGrid ang, FrequencyGrid f)
        : num_ports(ports), angles(std::move(ang)), freqs(f) {
        if (ports < 1)
            throw validation_error("ArrayPattern: need at least one port");
        gains.assign(ports, arma::cx_cube(angles.n_az(), angles.n_el(), freqs.count,
                                          arma::fill::zeros));
    }

    void check_consistent() const;
};

/// Geometry and element model of the synthetic cylindrical patch array.
/// Columns are placed around a vertical cylinder, each column facing
/// radially outward; rows are stacked along the cylinder axis. Ports are
/// numbered column-major with the row index fastest:
/// m = column * rows + row, row 0 at the bottom.
struct CylindricalArraySpec {
    std::size_t columns = 16;
    std::size_t rows = 4;
    double radius_m = 0.109;               // ~16 half-wavelength columns at 3.5 GHz
    double element_spacing_m = 0.0428;     // vertical row spacing, ~lambda/2
    double az_beamwidth_deg = 50.0;        // element FWHM, azimuth cut
    double el_beamwidth_deg = 100.0;       // element FWHM, elevation cut
    double first_column_azimuth_deg = 0.0; // boresight azimuth of column 0
    std::size_t angle_step_deg = 5;        // calibration grid resolution
    FrequencyGrid freqs;                   // calibration frequencies

    std::size_t num_ports() const { return columns * rows; }

    /// Element position of port m, meters, array frame.
    std::array<double, 3> element_position(std::size_t m) const;
};

/// Builds the synthetic calibration pattern for the given geometry:
/// a cosine-power element pattern (exponent solved from the FWHM
/// beamwidths, floored at -40 dB) rotated per column, times the far-field
/// geometric phase exp(+2*pi*j*f*<k(phi,theta), p_m>/c). Deterministic.
ArrayPattern make_synthetic_pattern(const CylindricalArraySpec& geometry);

/// Unit direction vector of arrival (phi, theta), theta polar from zenith.
inline std::array<double, 3> direction_unit_vector(double phi_rad, double theta_rad) {
    const double st = std::sin(theta_rad);
    return {st * std::cos(phi_rad), st * std::sin(phi_rad), std::cos(theta_rad)};
}

} // namespace chanex
