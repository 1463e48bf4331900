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

#include <cstddef>
#include <vector>

namespace chanex {

/// Uniform angular calibration grid. Azimuth covers the full circle
/// [0, 360) deg starting at 0; elevation is the polar angle and covers
/// the closed interval [0, 180] deg including both poles. Uniform spacing
/// is required by the spectral pattern transform.
///
/// Convention: theta is measured from zenith (theta = 90 deg is the
/// horizon), phi counterclockwise from the array x-axis. Files store
/// degrees; all internal math uses radians.
class AngleGrid {
  public:
    AngleGrid(std::vector<double> azimuth_deg, std::vector<double> elevation_deg)
        : az_deg_(std::move(azimuth_deg)), el_deg_(std::move(elevation_deg)) {
        validate();
    }

    /// Grid with uniform steps: n_az azimuth nodes over [0, 360) and
    /// elevation nodes 0..180 inclusive with step 180/(n_el-1).
    static AngleGrid uniform(std::size_t n_az, std::size_t n_el) {
        if (n_az < 2 || n_el < 2)
            throw validation_error("AngleGrid: need at least 2 nodes per axis");
        std::vector<double> az(n_az), el(n_el);
        for (std::size_t i = 0; i < n_az; ++i)
            az[i] = 360.0 * static_cast<double>(i) / static_cast<double>(n_az);
        for (std::size_t j = 0; j < n_el; ++j)
            el[j] = 180.0 * static_cast<double>(j) / static_cast<double>(n_el - 1);
        return AngleGrid(std::move(az), std::move(el));
    }

    std::size_t n_az() const { return az_deg_.size(); }
    std::size_t n_el() const { return el_deg_.size(); }

    double az_deg(std::size_t i) const { return az_deg_[i]; }
    double el_deg(std::size_t j) const { return el_deg_[j]; }
    double az_rad(std::size_t i) const { return deg2rad(az_deg_[i]); }
    double el_rad(std::size_t j) const { return deg2rad(el_deg_[j]); }

    double az_step_deg() const { return 360.0 / static_cast<double>(n_az()); }
    double el_step_deg() const { return 180.0 / static_cast<double>(n_el() - 1); }

    const std::vector<double>& azimuth_deg() const { return az_deg_; }
    const std::vector<double>& elevation_deg() const { return el_deg_; }

    bool same_as(const AngleGrid& o) const {
        return az_deg_ == o.az_deg_ && el_deg_ == o.el_deg_;
    }

  private:
    void validate() const {
        if (az_deg_.size() < 2 || el_deg_.size() < 2)
            throw validation_error("AngleGrid: need at least 2 nodes per axis");
        const double az_step = 360.0 / static_cast<double>(az_deg_.size());
        for (std::size_t i = 0; i < az_deg_.size(); ++i) {
            if (std::abs(az_deg_[i] - az_step * static_cast<double>(i)) > 1e-9 * 360.0)
                throw validation_error(
                    "AngleGrid: azimuth must be uniform over [0, 360) starting at 0");
        }
        const double el_step = 180.0 / static_cast<double>(el_deg_.size() - 1);
        for (std::size_t j = 0; j < el_deg_.size(); ++j) {
            if (std::abs(el_deg_[j] - el_step * static_cast<double>(j)) > 1e-9 * 180.0)
                throw validation_error(
                    "AngleGrid: elevation must be uniform over [0, 180] including poles");
        }
    }

    std::vector<double> az_deg_;
    std::vector<double> el_deg_;
};

} // namespace chanex
