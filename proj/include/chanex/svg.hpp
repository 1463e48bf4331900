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

#include "chanex/frequency_grid.hpp"

#include <string>
#include <vector>

namespace chanex {

struct PlotSeries {
    std::string label;
    std::vector<double> values_db; // one per grid frequency
};

/// Plain-text SVG line plot: frequency on x, dB on y, the training band
/// shaded, one polyline per series. No external renderer involved;
/// non-finite values are capped at +-200 dB.
std::string render_line_plot(const std::string& title, const FrequencyGrid& freqs,
                             const BandSelection& band,
                             const std::vector<PlotSeries>& series,
                             const std::string& y_label);

} // namespace chanex
