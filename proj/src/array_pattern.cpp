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

#include "chanex/array_pattern.hpp"

namespace chanex {

namespace {

constexpr double floor_amplitude = 0.01; // -40 dB relative to boresight

// cos^q exponent reproducing the half-power beamwidth; q = 0 means an
// isotropic cut (beamwidth 180 deg).
double cosine_exponent(double beamwidth_deg) {
    if (!(beamwidth_deg > 0.0) || beamwidth_deg > 180.0)
        throw validation_error("CylindricalArraySpec: beamwidth must be in (0, 180] deg");
    if (beamwidth_deg == 180.0)
        return 0.0;
    const double c = std::cos(deg2rad(beamwidth_deg) / 2.0);
    return std::log(0.5) / (2.0 * std::log(c));
}

double cosine_power_cut(double offset_rad, double q) {
    if (q == 0.0)
        return 1.0;
    const double c = std::cos(offset_rad);
    if (c <= 0.0)
        return 0.0;
    return std::pow(c, q);
}

double wrap_pm_pi(double a) {
    a = std::fmod(a, 2.0 * pi);
    if (a > pi)
        a -= 2.0 * pi;
    if (a < -pi)
        a += 2.0 * pi;
    return a;
}

} // namespace

void ArrayPattern::check_consistent() const {
    if (gains.size() != num_ports)
        throw validation_error("ArrayPattern: port count does not match gain tensor");
    for (const auto& g : gains) {
        if (g.n_rows != angles.n_az() || g.n_cols != angles.n_el() ||
            g.n_slices != freqs.count)
            throw validation_error("ArrayPattern: gain tensor dimensions inconsistent");
        if (!g.is_finite())
            throw validation_error("ArrayPattern: non-finite gain values");
    }
}

std::array<double, 3> CylindricalArraySpec::element_position(std::size_t m) const {
    const std::size_t col = m / rows;
    const std::size_t row = m % rows;
    const double psi =
        deg2rad(first_column_azimuth_deg) + 2.0 * pi * static_cast<double>(col) /
                                                static_cast<double>(columns);
    const double z =
        (static_cast<double>(row) - 0.5 * static_cast<double>(rows - 1)) * element_spacing_m;
    return {radius_m * std::cos(psi), radius_m * std::sin(psi), z};
}

ArrayPattern make_synthetic_pattern(const CylindricalArraySpec& geometry) {
    if (geometry.columns < 1 || geometry.rows < 1)
        throw validation_error("CylindricalArraySpec: columns and rows must be >= 1");
    if (geometry.radius_m < 0.0 || geometry.element_spacing_m < 0.0)
        throw validation_error("CylindricalArraySpec: radius and spacing must be >= 0");
    if (geometry.angle_step_deg < 1 || 360 % geometry.angle_step_deg != 0)
        throw validation_error("CylindricalArraySpec: angle_step_deg must divide 360");
    if (geometry.freqs.count < 1)
        throw validation_error("CylindricalArraySpec: empty calibration frequency grid");

    const double q_az = cosine_exponent(geometry.az_beamwidth_deg);
    const double q_el = cosine_exponent(geometry.el_beamwidth_deg);

    const std::size_t n_az = 360 / geometry.angle_step_deg;
    const std::size_t n_el = 180 / geometry.angle_step_deg + 1;
    AngleGrid grid = AngleGrid::uniform(n_az, n_el);

    const std::size_t M = geometry.num_ports();
    ArrayPattern p(M, grid, geometry.freqs);

    for (std::size_t m = 0; m < M; ++m) {
        const std::size_t col = m / geometry.rows;
        const double boresight_az =
            deg2rad(geometry.first_column_azimuth_deg) +
            2.0 * pi * static_cast<double>(col) / static_cast<double>(geometry.columns);
        const auto pos = geometry.element_position(m);
        auto& cube = p.gains[m];

        for (std::size_t i = 0; i < n_az; ++i) {
            const double phi = grid.az_rad(i);
            const double daz = wrap_pm_pi(phi - boresight_az);
            const double g_az = cosine_power_cut(daz, q_az);
            for (std::size_t j = 0; j < n_el; ++j) {
                const double theta = grid.el_rad(j);
                const double g_el = cosine_power_cut(theta - pi / 2.0, q_el);
                const double amp = std::max(g_az * g_el, floor_amplitude);
                const auto k_dir = direction_unit_vector(phi, theta);
                const double proj =
                    k_dir[0] * pos[0] + k_dir[1] * pos[1] + k_dir[2] * pos[2];
                for (std::size_t kf = 0; kf < geometry.freqs.count; ++kf) {
                    const double f = geometry.freqs.freq_hz(kf);
                    const double phase = 2.0 * pi * f * proj / speed_of_light;
                    cube(i, j, kf) = std::polar(amp, phase);
                }
            }
        }
    }
    return p;
}

} // namespace chanex
