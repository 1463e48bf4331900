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
#include "chanex/metrics.hpp"
#include "chanex/sage.hpp"
#include "chanex/scenario.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace chanex {

/// Pattern source: a synthetic geometry or a PATX1 file.
using PatternSource = std::variant<CylindricalArraySpec, std::string>;

/// A full experiment: channel source, pattern source, bands, estimator
/// sweep, impairments, output location. Built by validate_config from
/// strict JSON; empty JSON yields the full-scale default configuration
/// (64 ports, 2801 subcarriers starting at 3.325 GHz, 281-point training
/// band).
struct ExperimentConfig {
    std::optional<ScenarioKind> scenario; // exactly one of scenario / channel_file
    std::optional<std::string> channel_file;
    std::optional<std::string> b2b_file;
    PatternSource pattern;
    FrequencyGrid grid;
    BandSelection training;
    std::vector<EstimatorConfig> estimators;
    ImpairmentSpec impairment_overrides; // fields set here override scenario presets
    bool disable_noise = false;          // explicit "snr_db": null
    std::uint64_t seed = 1;
    std::string out_dir = "out";
    bool absolute_mse = false;

    void validate() const;
};

/// Defaults applied, unknown keys rejected, ranges checked.
ExperimentConfig validate_config(const std::string& raw_json);
std::string config_to_json(const ExperimentConfig& cfg);

struct ExperimentSummary {
    double mean_inband_mse_db = 0.0;
    std::optional<double> extrap_mse_db_at_40mhz;
    std::optional<double> extrap_mse_db_at_70mhz;
    std::optional<double> extrap_mse_db_at_165mhz;
    std::optional<double> mean_extrap_mse_db_beyond_100mhz;
    double max_rbg_db = 0.0;
};

/// Derives the summary numbers from a stored metric series. Offsets are
/// measured from the upper edge of the training band; the "at offset X"
/// values average the linear MSE over a +-2.5 MHz window around that
/// offset and are absent when the grid does not reach it.
ExperimentSummary summarize(const MetricSeries& s);

struct EstimatorRun {
    EstimatorConfig config;
    EstimationReport report;
    MetricSeries series;
    ExperimentSummary summary;
};

struct ExperimentResult {
    ExperimentConfig config;
    PathSet truth_paths; // empty in file mode
    ChannelMatrix h_chan;
    std::vector<EstimatorRun> runs;
};

/// Runs the full pipeline: scenario generation or file ingestion, band
/// selection, estimation with the (possibly perturbed) pattern,
/// reconstruction over the full grid with that same pattern, metrics
/// against the ground-truth channel, artifacts on disk:
///   out_dir/{config.json, h_chan.chx1, paths_truth.json,
///            h_sage_L{n}.chx1, paths_L{n}.json, metrics_L{n}.csv,
///            summary.json, plots/*.svg}
/// Fully deterministic given config + seed.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Renders the MSE and RBG figures for an already-computed result.
void emit_plots(const ExperimentResult& result, const std::string& out_dir);

} // namespace chanex
