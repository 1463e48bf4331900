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
#include <utility>

namespace chanex {

/// Uniform subcarrier grid. Frequencies are always computed from the index
/// (start + k * step), never by repeated addition, so there is no
/// accumulated rounding across long grids.
struct FrequencyGrid {
    double start_hz = 0.0;
    double step_hz = 0.0;
    std::size_t count = 0;

    FrequencyGrid() = default;

    FrequencyGrid(double start, double step, std::size_t n)
        : start_hz(start), step_hz(step), count(n) {
        if (!(step > 0.0))
            throw validation_error("FrequencyGrid: step_hz must be > 0");
        if (n < 1)
            throw validation_error("FrequencyGrid: count must be >= 1");
        if (!std::isfinite(start) || !std::isfinite(step))
            throw validation_error("FrequencyGrid: non-finite parameters");
    }

    double freq_hz(std::size_t k) const { return start_hz + static_cast<double>(k) * step_hz; }

    double last_hz() const { return freq_hz(count - 1); }

    double span_hz() const { return static_cast<double>(count - 1) * step_hz; }

    bool same_as(const FrequencyGrid& o) const {
        return start_hz == o.start_hz && step_hz == o.step_hz && count == o.count;
    }

    FrequencyGrid subgrid(std::size_t first, std::size_t n) const {
        if (first + n > count)
            throw std::out_of_range("FrequencyGrid::subgrid: selection outside grid");
        return FrequencyGrid(freq_hz(first), step_hz, n);
    }
};

/// Contiguous index window into a FrequencyGrid (the training band f_tb).
struct BandSelection {
    std::size_t start_index = 0;
    std::size_t count = 0;

    BandSelection() = default;

    BandSelection(std::size_t start, std::size_t n) : start_index(start), count(n) {
        if (n < 2)
            throw validation_error("BandSelection: count must be >= 2");
    }

    void check_within(const FrequencyGrid& grid) const {
        if (count < 2)
            throw validation_error("BandSelection: count must be >= 2");
        if (start_index + count > grid.count)
            throw std::out_of_range("BandSelection: selection outside frequency grid");
    }

    bool contains(std::size_t k) const { return k >= start_index && k < start_index + count; }
};

/// Bracketing calibration interval for linear interpolation at frequency f.
/// Returns (k, w) with f ~ (1-w)*freq(k) + w*freq(k+1), k <= count-2.
/// A small absolute slack absorbs last-ulp drift between grids that are
/// mathematically coincident.
inline std::pair<std::size_t, double> bracket(const FrequencyGrid& g, double f_hz) {
    constexpr double slack = 1e-3; // Hz
    if (g.count < 2)
        throw std::out_of_range("bracket: grid has fewer than 2 points");
    if (f_hz < g.start_hz - slack || f_hz > g.last_hz() + slack)
        throw std::out_of_range("bracket: frequency outside calibration span");
    double t = (f_hz - g.start_hz) / g.step_hz;
    if (t < 0.0)
        t = 0.0;
    auto k = static_cast<std::size_t>(t);
    if (k > g.count - 2)
        k = g.count - 2;
    double w = (f_hz - g.freq_hz(k)) / g.step_hz;
    if (w < 0.0)
        w = 0.0;
    if (w > 1.0)
        w = 1.0;
    return {k, w};
}

} // namespace chanex
