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

#include "chanex/eadf.hpp"

namespace chanex {

double normalize_azimuth(double phi_rad) {
    double p = std::fmod(phi_rad, 2.0 * pi);
    if (p < 0.0)
        p += 2.0 * pi;
    return p;
}

double check_polar(double theta_rad) {
    constexpr double slack = 1e-12;
    if (theta_rad < -slack || theta_rad > pi + slack)
        throw std::out_of_range("elevation angle outside [0, 180] deg");
    if (theta_rad < 0.0)
        return 0.0;
    if (theta_rad > pi)
        return pi;
    return theta_rad;
}

arma::cx_vec eadf_basis(std::size_t n, double angle_rad) {
    arma::cx_vec b(n);
    const auto half = static_cast<std::ptrdiff_t>(n) / 2;
    for (std::size_t idx = 0; idx < n; ++idx) {
        auto mu = static_cast<std::ptrdiff_t>(idx);
        if (mu > half)
            mu -= static_cast<std::ptrdiff_t>(n);
        if (n % 2 == 0 && mu == half) {
            b[idx] = cx(std::cos(static_cast<double>(half) * angle_rad), 0.0);
        } else {
            const double a = static_cast<double>(mu) * angle_rad;
            b[idx] = cx(std::cos(a), std::sin(a));
        }
    }
    return b;
}

EadfPattern eadf_from_pattern(const ArrayPattern& p) {
    p.check_consistent();
    const std::size_t n_az = p.angles.n_az();
    const std::size_t n_el = p.angles.n_el();
    if (n_az % 2 != 0)
        throw validation_error(
            "eadf_from_pattern: azimuth node count must be even (180 deg shift)");
    const std::size_t n_el2 = 2 * (n_el - 1);

    EadfPattern e(p.num_ports, p.angles, p.freqs);
    e.n_az = n_az;
    e.n_el2 = n_el2;
    e.coeff.set_size(p.num_ports, p.freqs.count);

    const double norm = 1.0 / static_cast<double>(n_az * n_el2);
    arma::cx_mat periodified(n_az, n_el2);
    for (std::size_t m = 0; m < p.num_ports; ++m) {
        for (std::size_t kf = 0; kf < p.freqs.count; ++kf) {
            for (std::size_t j = 0; j < n_el; ++j)
                for (std::size_t i = 0; i < n_az; ++i)
                    periodified(i, j) = p.gains[m](i, j, kf);
            // continuation over the poles: theta -> 2*pi - theta, phi += pi
            for (std::size_t j = n_el; j < n_el2; ++j) {
                const std::size_t jm = n_el2 - j;
                for (std::size_t i = 0; i < n_az; ++i)
                    periodified(i, j) = p.gains[m]((i + n_az / 2) % n_az, jm, kf);
            }
            e.coeff(m, kf) = arma::fft2(periodified) * norm;
        }
    }
    return e;
}

cx evaluate_pattern(const EadfPattern& e, std::size_t m, double phi_rad, double theta_rad,
                    double f_hz) {
    if (m >= e.num_ports)
        throw std::out_of_range("evaluate_pattern: port index out of range");
    const double phi = normalize_azimuth(phi_rad);
    const double theta = check_polar(theta_rad);
    const arma::cx_vec baz = eadf_basis(e.n_az, phi);
    const arma::cx_vec bel = eadf_basis(e.n_el2, theta);

    if (e.freqs.count == 1) {
        constexpr double slack = 1e-3;
        if (std::abs(f_hz - e.freqs.start_hz) > slack)
            throw std::out_of_range("evaluate_pattern: frequency outside calibration span");
        return arma::as_scalar(baz.st() * e.coeff(m, 0) * bel);
    }

    const auto [k, w] = bracket(e.freqs, f_hz);
    const cx a0 = arma::as_scalar(baz.st() * e.coeff(m, k) * bel);
    const cx a1 = arma::as_scalar(baz.st() * e.coeff(m, k + 1) * bel);
    return (1.0 - w) * a0 + w * a1;
}

arma::cx_mat eadf_eval_ports(const EadfPattern& e, double phi_rad, double theta_rad,
                             std::size_t k0, std::size_t k1) {
    if (k1 >= e.freqs.count || k0 > k1)
        throw std::out_of_range("eadf_eval_ports: calibration index range invalid");
    const double phi = normalize_azimuth(phi_rad);
    const double theta = check_polar(theta_rad);
    const arma::cx_vec baz = eadf_basis(e.n_az, phi);
    const arma::cx_vec bel = eadf_basis(e.n_el2, theta);
    arma::cx_mat out(e.num_ports, k1 - k0 + 1);
    for (std::size_t m = 0; m < e.num_ports; ++m)
        for (std::size_t k = k0; k <= k1; ++k)
            out(m, k - k0) = arma::as_scalar(baz.st() * e.coeff(m, k) * bel);
    return out;
}

} // namespace chanex
