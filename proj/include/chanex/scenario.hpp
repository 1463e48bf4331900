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

#include "chanex/path_model.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace chanex {

enum class ScenarioKind { chamber_los, outdoor_los, outdoor_plos, outdoor_nlos };

std::string scenario_name(ScenarioKind k);
ScenarioKind scenario_from_name(const std::string& s);

/// Knobs that turn an ideal synthetic channel into a realistic one.
/// All optional; at most one wavefront model is active (planar is the
/// default, spherical when a source distance is set).
struct ImpairmentSpec {
    std::optional<double> snr_db;
    std::optional<double> calib_phase_sigma_deg;
    std::optional<double> calib_gain_sigma_db;
    std::optional<PortGainMask> plos_mask;
    std::optional<double> spherical_source_distance_m;
    std::uint64_t rng_seed = 0;

    void validate() const {
        if (calib_phase_sigma_deg && *calib_phase_sigma_deg < 0.0)
            throw validation_error("ImpairmentSpec: calib_phase_sigma_deg must be >= 0");
        if (calib_gain_sigma_db && *calib_gain_sigma_db < 0.0)
            throw validation_error("ImpairmentSpec: calib_gain_sigma_db must be >= 0");
        if (spherical_source_distance_m && !(*spherical_source_distance_m > 0.0))
            throw validation_error("ImpairmentSpec: spherical distance must be > 0");
    }
};

struct Scenario {
    PathSet paths;
    std::optional<PortGainMask> mask;
    ImpairmentSpec impairments;
};

/// Deterministic preset generators. Geometry (columns x rows, port index
/// = column * rows + row) is needed to build the partial-LOS mask and
/// defaults to the 64-port array.
///
///  chamber_los : 1-2 paths, 40 dB SNR
///  outdoor_los : 1 dominant path + 5-9 weak ones (-15..-25 dB), 30 dB SNR
///  outdoor_plos: the LOS preset plus a mask attenuating rows 2-4 of the
///                dominant path by 15 dB
///  outdoor_nlos: 15-25 paths, exponential power-delay profile (200 ns RMS
///                spread, delays in [0, 1 us]), 20 dB SNR
Scenario make_scenario(ScenarioKind kind, std::uint64_t seed, std::size_t columns = 16,
                       std::size_t rows = 4);

} // namespace chanex
