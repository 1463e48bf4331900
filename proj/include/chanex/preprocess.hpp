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

#include <armadillo>
#include <cstdint>

namespace chanex {

/// RF chain frequency response measured with TX wired straight to RX.
/// Must be invertible everywhere (|value| > 0).
struct B2bResponse {
    FrequencyGrid freqs;
    arma::cx_vec values;

    void check_consistent() const {
        if (values.n_elem != freqs.count)
            throw validation_error("B2bResponse: length does not match grid");
        if (!values.is_finite())
            throw validation_error("B2bResponse: non-finite values");
    }
};

/// Divides the RF-chain response out of a measurement; the result carries
/// the chan role. Rejects grid mismatches and near-zero divisors.
ChannelMatrix compensate_b2b(const ChannelMatrix& h_meas, const B2bResponse& b2b);

/// Multiplies the RF-chain response back in (test helper for round trips).
ChannelMatrix apply_b2b(const ChannelMatrix& h, const B2bResponse& b2b);

/// Sub-matrix over the selected band with the frequency grid advanced
/// accordingly. Values are copied bit-exactly.
ChannelMatrix select_band(const ChannelMatrix& h, const BandSelection& sel);

/// Smooth random RF-chain ripple: exp of a complex polynomial of order 5
/// over the normalized band, magnitude ripple capped at 3 dB total.
B2bResponse synthetic_b2b(const FrequencyGrid& freqs, std::uint64_t seed);

} // namespace chanex
