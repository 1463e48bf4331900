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

#include "chanex/common.hpp"

#include <algorithm>
#include <cstddef>
#include <vector>

namespace chanex {

/// One multipath component: complex amplitude, delay, direction of arrival.
struct PathParams {
    cx alpha{0.0, 0.0};
    double tau_s = 0.0;
    double phi_rad = 0.0;
    double theta_rad = pi / 2.0;

    void validate() const {
        if (!std::isfinite(alpha.real()) || !std::isfinite(alpha.imag()))
            throw validation_error("PathParams: non-finite amplitude");
        if (!(tau_s >= 0.0) || !std::isfinite(tau_s))
            throw validation_error("PathParams: delay must be >= 0");
        if (!std::isfinite(phi_rad) || !std::isfinite(theta_rad))
            throw validation_error("PathParams: non-finite angles");
        if (theta_rad < 0.0 || theta_rad > pi)
            throw validation_error("PathParams: elevation outside [0, 180] deg");
    }
};

/// Ordered list of multipath components. Canonical form after estimation is
/// descending |alpha|, which makes path sets comparable across runs.
struct PathSet {
    std::vector<PathParams> paths;

    std::size_t size() const { return paths.size(); }
    bool empty() const { return paths.empty(); }

    void validate() const {
        for (const auto& p : paths)
            p.validate();
    }

    void sort_canonical() {
        std::stable_sort(paths.begin(), paths.end(), [](const PathParams& a, const PathParams& b) {
            return std::abs(a.alpha) > std::abs(b.alpha);
        });
    }

    void scale(cx c) {
        for (auto& p : paths)
            p.alpha *= c;
    }
};

/// Per-port complex multipliers applied to a subset of paths during
/// synthesis; the mechanism for partial-LOS channels where a component's
/// amplitude is not constant across the array.
struct PortGainMask {
    std::vector<cx> port_gain;           // length = number of ports
    std::vector<std::size_t> applies_to; // path indices the mask acts on

    bool applies_to_path(std::size_t l) const {
        return std::find(applies_to.begin(), applies_to.end(), l) != applies_to.end();
    }

    void validate(std::size_t num_ports, std::size_t num_paths) const {
        if (port_gain.size() != num_ports)
            throw validation_error("PortGainMask: multiplier count does not match ports");
        for (const auto& g : port_gain)
            if (!std::isfinite(g.real()) || !std::isfinite(g.imag()))
                throw validation_error("PortGainMask: non-finite multiplier");
        for (auto idx : applies_to)
            if (idx >= num_paths)
                throw validation_error("PortGainMask: path index out of range");
    }
};

} // namespace chanex
