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

#include "chanex/preprocess.hpp"

#include <doctest.h>

using namespace chanex;

namespace {

ChannelMatrix random_channel(std::size_t ports, const FrequencyGrid& grid,
                             std::uint64_t seed) {
    ChannelMatrix h(ports, grid, ChannelMatrix::Role::measured);
    Rng rng(seed);
    for (std::size_t fi = 0; fi < grid.count; ++fi)
        for (std::size_t m = 0; m < ports; ++m)
            h.values(m, fi) = cx(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
    return h;
}

} // namespace

TEST_SUITE("preprocess") {

    TEST_CASE("unity response is the identity") {
        const FrequencyGrid grid(3.325e9, 1e6, 12);
        const ChannelMatrix h = random_channel(4, grid, 10);
        B2bResponse b2b;
        b2b.freqs = grid;
        b2b.values.ones(grid.count);
        const ChannelMatrix out = compensate_b2b(h, b2b);
        CHECK(out.role == ChannelMatrix::Role::chan);
        CHECK(arma::norm(out.values - h.values, "fro") == 0.0);
    }

    TEST_CASE("constant response scales the channel") {
        const FrequencyGrid grid(3.325e9, 1e6, 12);
        const ChannelMatrix h = random_channel(4, grid, 11);
        B2bResponse b2b;
        b2b.freqs = grid;
        b2b.values.set_size(grid.count);
        b2b.values.fill(cx(2.0, 0.0));
        const ChannelMatrix out = compensate_b2b(h, b2b);
        CHECK(arma::norm(out.values - 0.5 * h.values, "fro") < 1e-14);
    }

    TEST_CASE("dividing a single-port channel by itself gives ones") {
        const FrequencyGrid grid(3.325e9, 1e6, 12);
        const ChannelMatrix h = random_channel(1, grid, 12);
        B2bResponse b2b;
        b2b.freqs = grid;
        b2b.values = h.values.row(0).st();
        const ChannelMatrix out = compensate_b2b(h, b2b);
        for (std::size_t fi = 0; fi < grid.count; ++fi)
            CHECK(std::abs(out.values(0, fi) - cx(1.0, 0.0)) < 1e-14);
    }

    TEST_CASE("apply then compensate is a round trip") {
        const FrequencyGrid grid(3.325e9, 0.5e6, 201);
        const ChannelMatrix h = random_channel(8, grid, 13);
        const B2bResponse b2b = synthetic_b2b(grid, 99);
        const ChannelMatrix round = compensate_b2b(apply_b2b(h, b2b), b2b);
        CHECK(arma::norm(round.values - h.values, "fro") / arma::norm(h.values, "fro") <
              1e-12);
    }

    TEST_CASE("grid mismatch and non-invertible responses are rejected") {
        const FrequencyGrid grid(3.325e9, 1e6, 12);
        const ChannelMatrix h = random_channel(2, grid, 14);
        B2bResponse other;
        other.freqs = FrequencyGrid(3.325e9, 2e6, 12);
        other.values.ones(12);
        CHECK_THROWS_AS(compensate_b2b(h, other), validation_error);

        B2bResponse dead;
        dead.freqs = grid;
        dead.values.ones(grid.count);
        dead.values[5] = cx(1e-13, 0.0);
        CHECK_THROWS_AS(compensate_b2b(h, dead), numeric_error);
    }

    TEST_CASE("synthetic response is smooth, invertible, and within 3 dB ripple") {
        const FrequencyGrid grid(3.325e9, 0.125e6, 2801);
        for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
            const B2bResponse b2b = synthetic_b2b(grid, seed);
            double lo = 1e300, hi = 0.0;
            for (std::size_t fi = 0; fi < grid.count; ++fi) {
                const double mag = std::abs(b2b.values[fi]);
                CHECK(mag > 1e-12);
                lo = std::min(lo, mag);
                hi = std::max(hi, mag);
            }
            CHECK(20.0 * std::log10(hi / lo) <= 3.0 + 1e-9);
        }
    }

    TEST_CASE("band selection keeps values bit-exactly") {
        const FrequencyGrid grid(3.325e9, 0.125e6, 2801);
        const ChannelMatrix h = random_channel(4, grid, 15);
        const BandSelection band(0, 281);
        const ChannelMatrix sub = select_band(h, band);
        CHECK(sub.freqs.start_hz == 3.325e9);
        CHECK(sub.freqs.count == 281);
        CHECK(sub.freqs.freq_hz(280) == 3.36e9); // the 35 MHz training band
        for (std::size_t m = 0; m < 4; ++m)
            for (std::size_t fi = 0; fi < 281; ++fi)
                CHECK(sub.values(m, fi) == h.values(m, fi));

        // shifted window
        const ChannelMatrix mid = select_band(h, BandSelection(100, 50));
        CHECK(mid.freqs.start_hz == grid.freq_hz(100));
        CHECK(mid.values(1, 0) == h.values(1, 100));
    }

    TEST_CASE("full-width selection is the identity") {
        const FrequencyGrid grid(3.325e9, 1e6, 64);
        const ChannelMatrix h = random_channel(2, grid, 16);
        const ChannelMatrix same = select_band(h, BandSelection(0, 64));
        CHECK(same.freqs.same_as(grid));
        CHECK(arma::norm(same.values - h.values, "fro") == 0.0);
    }

    TEST_CASE("selection outside the grid is rejected") {
        const FrequencyGrid grid(3.325e9, 0.125e6, 2801);
        const ChannelMatrix h = random_channel(2, grid, 17);
        CHECK_THROWS_AS(BandSelection(2801, 1), validation_error); // count < 2
        CHECK_THROWS_AS(select_band(h, BandSelection(2801, 2)), std::out_of_range);
        CHECK_THROWS_AS(select_band(h, BandSelection(2700, 200)), std::out_of_range);
    }
}
