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
#include "chanex/channel.hpp"
#include "chanex/path_model.hpp"
#include "chanex/preprocess.hpp"
#include "chanex/sage.hpp"

#include <string>

namespace chanex {

// File formats. A header file holds a JSON object; the complex samples live
// in a sibling binary file "<header path>.bin" as little-endian float64
// (re, im) pairs.
//
//   PATX1 header: {magic:"PATX1", ports, azimuth_deg:[...],
//                  elevation_deg:[...], freq_start_hz, freq_step_hz,
//                  freq_count}
//     binary order: port outermost, then azimuth, elevation, frequency
//     innermost.
//
//   CHX1 header:  {magic:"CHX1", ports, freq_start_hz, freq_step_hz,
//                  freq_count, role}
//     binary order: port-major (all frequencies of port 0, then port 1...).
//     A back-to-back response is a CHX1 file with ports = 1 and role "b2b".

void write_patx1(const std::string& path, const ArrayPattern& p);
ArrayPattern read_patx1(const std::string& path);

void write_chx1(const std::string& path, const ChannelMatrix& h);
ChannelMatrix read_chx1(const std::string& path);

void write_b2b_chx1(const std::string& path, const B2bResponse& b);
B2bResponse read_b2b_chx1(const std::string& path);

/// Path files are a JSON array of
/// {alpha_re, alpha_im, tau_s, phi_deg, theta_deg}.
void write_paths_json(const std::string& path, const PathSet& ps);
PathSet read_paths_json(const std::string& path);
std::string paths_to_json(const PathSet& ps);
PathSet paths_from_json(const std::string& text);

/// Estimator config/report JSON, used by the CLI. Unknown keys rejected.
EstimatorConfig estimator_config_from_json(const std::string& text);
std::string estimator_config_to_json(const EstimatorConfig& cfg);
std::string report_to_json(const EstimationReport& report);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

} // namespace chanex
