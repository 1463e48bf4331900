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

#include "chanex/scenario.hpp"

namespace chanex {

std::string scenario_name(ScenarioKind k) {
    switch (k) {
    case ScenarioKind::chamber_los:
        return "chamber_los";
    case ScenarioKind::outdoor_los:
        return "outdoor_los";
    case ScenarioKind::outdoor_plos:
        return "outdoor_plos";
    case ScenarioKind::outdoor_nlos:
        return "outdoor_nlos";
    }
    return "outdoor_los";
}

ScenarioKind scenario_from_name(const std::string& s) {
    if (s == "chamber_los")
        return ScenarioKind::chamber_los;
    if (s == "outdoor_los")
        return ScenarioKind::outdoor_los;
    if (s == "outdoor_plos")
        return ScenarioKind::outdoor_plos;
    if (s == "outdoor_nlos")
        return ScenarioKind::outdoor_nlos;
    throw validation_error("unknown scenario kind: " + s);
}

namespace {

PathParams random_path(Rng& rng, double rel_db, double tau_lo_s, double tau_hi_s,
                       double el_lo_deg, double el_hi_deg) {
    PathParams p;
    p.alpha = std::polar(std::pow(10.0, rel_db / 20.0), rng.uniform(0.0, 2.0 * pi));
    p.tau_s = rng.uniform(tau_lo_s, tau_hi_s);
    p.phi_rad = rng.uniform(0.0, 2.0 * pi);
    p.theta_rad = deg2rad(rng.uniform(el_lo_deg, el_hi_deg));
    return p;
}

PathSet chamber_paths(Rng& rng) {
    PathSet ps;
    PathParams dominant = random_path(rng, 0.0, 50e-9, 300e-9, 80.0, 100.0);
    dominant.alpha = std::polar(1.0, rng.uniform(0.0, 2.0 * pi));
    ps.paths.push_back(dominant);
    if (rng.uniform() < 0.5) {
        PathParams echo = random_path(rng, -20.0, dominant.tau_s + 20e-9,
                                      dominant.tau_s + 100e-9, 60.0, 120.0);
        ps.paths.push_back(echo);
    }
    return ps;
}

PathSet outdoor_los_paths(Rng& rng) {
    PathSet ps;
    PathParams dominant = random_path(rng, 0.0, 100e-9, 500e-9, 60.0, 120.0);
    ps.paths.push_back(dominant);
    const auto n_weak = static_cast<std::size_t>(5 + rng.next_u64() % 5); // 5..9
    for (std::size_t i = 0; i < n_weak; ++i) {
        const double rel_db = rng.uniform(-25.0, -15.0);
        ps.paths.push_back(random_path(rng, rel_db, dominant.tau_s + 10e-9,
                                       dominant.tau_s + 600e-9, 60.0, 120.0));
    }
    return ps;
}

PathSet outdoor_nlos_paths(Rng& rng) {
    constexpr double rms_spread_s = 200e-9;
    PathSet ps;
    const auto n = static_cast<std::size_t>(15 + rng.next_u64() % 11); // 15..25
    for (std::size_t i = 0; i < n; ++i) {
        PathParams p = random_path(rng, 0.0, 0.0, 1e-6, 60.0, 120.0);
        const double power = std::exp(-p.tau_s / rms_spread_s);
        p.alpha = std::polar(std::sqrt(power), rng.uniform(0.0, 2.0 * pi));
        ps.paths.push_back(p);
    }
    ps.sort_canonical();
    return ps;
}

PortGainMask plos_mask(std::size_t columns, std::size_t rows) {
    PortGainMask mask;
    const double att = std::pow(10.0, -15.0 / 20.0);
    mask.port_gain.resize(columns * rows);
    for (std::size_t m = 0; m < columns * rows; ++m)
        mask.port_gain[m] = (m % rows == 0) ? cx(1.0, 0.0) : cx(att, 0.0);
    mask.applies_to = {0}; // dominant path only
    return mask;
}

} // namespace

Scenario make_scenario(ScenarioKind kind, std::uint64_t seed, std::size_t columns,
                       std::size_t rows) {
    if (columns < 1 || rows < 1)
        throw validation_error("make_scenario: columns and rows must be >= 1");
    Rng rng(derive_seed(seed, 0x5ce0));
    Scenario sc;
    sc.impairments.rng_seed = seed;
    switch (kind) {
    case ScenarioKind::chamber_los:
        sc.paths = chamber_paths(rng);
        sc.impairments.snr_db = 40.0;
        break;
    case ScenarioKind::outdoor_los:
        sc.paths = outdoor_los_paths(rng);
        sc.impairments.snr_db = 30.0;
        break;
    case ScenarioKind::outdoor_plos:
        sc.paths = outdoor_los_paths(rng);
        sc.mask = plos_mask(columns, rows);
        sc.impairments.plos_mask = sc.mask;
        sc.impairments.snr_db = 30.0;
        break;
    case ScenarioKind::outdoor_nlos:
        sc.paths = outdoor_nlos_paths(rng);
        sc.impairments.snr_db = 20.0;
        break;
    }
    return sc;
}

} // namespace chanex
