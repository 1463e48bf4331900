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

#include "chanex/channel.hpp"

#include <string>
#include <vector>

namespace chanex {

/// Per-frequency MSE and reduction-of-beamforming-gain curves in dB, with
/// the training band annotated. In-memory values keep +-inf sentinels;
/// serialization caps them at +-200 dB.
struct MetricSeries {
    FrequencyGrid freqs;
    std::vector<double> mse_db;
    std::vector<double> rbg_db;
    BandSelection training_band;
};

/// Mean squared reconstruction error across ports at one frequency:
/// (1/M) * sum_m |h_chan(m,f) - h_sage(m,f)|^2. Linear scale.
double mse_at(const ChannelMatrix& h_chan, const ChannelMatrix& h_sage, std::size_t f_index);

/// Reduction of beamforming gain at one frequency, linear scale, >= 1:
/// (sum|h_sage|^2)(sum|h_chan|^2) / |sum h_sage^* h_chan|^2.
/// Equals 1 exactly when the estimate is collinear with the truth; returns
/// +inf when the matched-filter output is zero (orthogonal estimate).
double rbg_at(const ChannelMatrix& h_chan, const ChannelMatrix& h_sage, std::size_t f_index);

/// Matched-filter array gain relative to single-element average power:
/// |sum h_sage^* h_chan|^2 / (sum|h_sage|^2 * mean|h_chan|^2). Equals the
/// port count for a perfect constant-magnitude estimate.
double array_gain(const ChannelMatrix& h_sage, const ChannelMatrix& h_chan,
                  std::size_t f_index);

/// mse_at / rbg_at over every frequency, converted to dB.
MetricSeries sweep(const ChannelMatrix& h_chan, const ChannelMatrix& h_sage,
                   const BandSelection& training_band);

/// CSV serialization: header "freq_hz,mse_db,rbg_db,in_training_band", one
/// row per subcarrier, 9 significant digits, sentinels capped at +-200 dB.
std::string metrics_to_csv(const MetricSeries& s);

inline double to_db(double linear) { return 10.0 * std::log10(linear); }
inline double from_db(double db) { return std::pow(10.0, db / 10.0); }

} // namespace chanex
