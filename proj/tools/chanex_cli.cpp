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

#include "chanex/experiment.hpp"
#include "chanex/io.hpp"
#include "chanex/preprocess.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <iostream>

namespace {

using namespace chanex;

constexpr int exit_ok = 0;
constexpr int exit_validation = 2;
constexpr int exit_io = 3;
constexpr int exit_numeric = 4;

struct CommonOpts {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<double> train_start_hz;
    std::optional<std::size_t> train_count;
    bool absolute = false;
};

ExperimentConfig load_config(const CommonOpts& opts) {
    const std::string raw =
        opts.config_path.empty() ? "{}" : read_text_file(opts.config_path);
    ExperimentConfig cfg = validate_config(raw);
    if (opts.seed)
        cfg.seed = *opts.seed;
    if (opts.out)
        cfg.out_dir = *opts.out;
    if (opts.absolute)
        cfg.absolute_mse = true;
    if (opts.train_start_hz || opts.train_count) {
        std::size_t start = cfg.training.start_index;
        std::size_t count = cfg.training.count;
        if (opts.train_start_hz) {
            const double rel = (*opts.train_start_hz - cfg.grid.start_hz) / cfg.grid.step_hz;
            if (rel < -0.5 || rel > static_cast<double>(cfg.grid.count) - 0.5)
                throw validation_error("--train-start-hz outside the frequency grid");
            start = static_cast<std::size_t>(rel + 0.5);
        }
        if (opts.train_count)
            count = *opts.train_count;
        cfg.training = BandSelection(start, count);
        cfg.training.check_within(cfg.grid);
    }
    cfg.validate();
    return cfg;
}

BandSelection training_from_opts(const CommonOpts& opts, const FrequencyGrid& grid) {
    std::size_t start = 0;
    std::size_t count = std::min<std::size_t>(281, grid.count);
    if (opts.train_start_hz) {
        const double rel = (*opts.train_start_hz - grid.start_hz) / grid.step_hz;
        if (rel < -0.5 || rel > static_cast<double>(grid.count) - 0.5)
            throw validation_error("--train-start-hz outside the frequency grid");
        start = static_cast<std::size_t>(rel + 0.5);
    }
    if (opts.train_count)
        count = *opts.train_count;
    BandSelection band(start, count);
    band.check_within(grid);
    return band;
}

void add_common(CLI::App* app, CommonOpts& opts, bool with_config = true) {
    if (with_config)
        app->add_option("--config", opts.config_path, "experiment config JSON");
    app->add_option("--seed", opts.seed, "seed override");
    app->add_option("--out", opts.out, "output path or directory");
    app->add_option("--train-start-hz", opts.train_start_hz, "training band start frequency");
    app->add_option("--train-count", opts.train_count, "training band subcarrier count");
    app->add_flag("--absolute", opts.absolute, "disable training-band power normalization");
}

int cmd_synth(const CommonOpts& opts) {
    ExperimentConfig cfg = load_config(opts);
    if (!cfg.scenario)
        throw validation_error("synth needs a scenario config (not channel_file)");
    const auto& spec = std::get<CylindricalArraySpec>(cfg.pattern);

    const ArrayPattern pattern = make_synthetic_pattern(spec);
    const EadfPattern eadf = eadf_from_pattern(pattern);
    Scenario sc = make_scenario(*cfg.scenario, cfg.seed, spec.columns, spec.rows);
    const PortGainMask* mask = sc.mask ? &*sc.mask : nullptr;
    ChannelMatrix h = synthesize_channel(sc.paths, eadf, cfg.grid, mask);
    if (!cfg.absolute_mse) {
        const double p = band_mean_power(h, cfg.training);
        if (p <= 0.0)
            throw numeric_error("scenario produced zero training-band power");
        const double s = 1.0 / std::sqrt(p);
        h.values *= s;
        sc.paths.scale(cx(s, 0.0));
    }
    if (sc.impairments.snr_db)
        h = add_awgn(h, *sc.impairments.snr_db, derive_seed(cfg.seed, 0xa3));

    std::filesystem::create_directories(cfg.out_dir);
    write_chx1(cfg.out_dir + "/h_chan.chx1", h);
    write_patx1(cfg.out_dir + "/pattern.patx1", pattern);
    write_paths_json(cfg.out_dir + "/paths_truth.json", sc.paths);
    std::cout << "wrote " << cfg.out_dir << "/h_chan.chx1 (" << h.num_ports << " ports, "
              << h.freqs.count << " subcarriers)\n";
    return exit_ok;
}

int cmd_estimate(const CommonOpts& opts, const std::string& channel_path,
                 const std::string& pattern_path) {
    const ChannelMatrix h = read_chx1(channel_path);
    const EadfPattern eadf = eadf_from_pattern(read_patx1(pattern_path));
    EstimatorConfig ecfg;
    if (!opts.config_path.empty()) {
        const ExperimentConfig cfg = validate_config(read_text_file(opts.config_path));
        ecfg = cfg.estimators.front();
    }
    const BandSelection band = training_from_opts(opts, h.freqs);
    const ChannelMatrix h_train = select_band(h, band);
    const EstimationReport report = estimate(h_train, eadf, ecfg);
    const std::string out = opts.out.value_or("paths.json");
    write_text_file(out, report_to_json(report));
    std::cout << "wrote " << out << " (" << report.paths.size() << " paths, "
              << (report.converged ? "converged" : "max cycles") << ")\n";
    return exit_ok;
}

int cmd_extrapolate(const CommonOpts& opts, const std::string& paths_path,
                    const std::string& pattern_path, double start_hz, double step_hz,
                    std::size_t count) {
    const PathSet paths = read_paths_json(paths_path);
    const EadfPattern eadf = eadf_from_pattern(read_patx1(pattern_path));
    const FrequencyGrid grid(start_hz, step_hz, count);
    const ChannelMatrix h =
        synthesize_channel(paths, eadf, grid, nullptr, ChannelMatrix::Role::sage);
    const std::string out = opts.out.value_or("h_sage.chx1");
    write_chx1(out, h);
    std::cout << "wrote " << out << "\n";
    return exit_ok;
}

int cmd_evaluate(const CommonOpts& opts, const std::string& truth_path,
                 const std::string& est_path) {
    ChannelMatrix truth = read_chx1(truth_path);
    ChannelMatrix est = read_chx1(est_path);
    const BandSelection band = training_from_opts(opts, truth.freqs);
    if (!opts.absolute) {
        const double p = band_mean_power(truth, band);
        if (p <= 0.0)
            throw numeric_error("truth has zero power in the training band");
        const double s = 1.0 / std::sqrt(p);
        truth.values *= s;
        est.values *= s;
    }
    const MetricSeries series = sweep(truth, est, band);
    const std::string out = opts.out.value_or("metrics.csv");
    write_text_file(out, metrics_to_csv(series));
    std::cout << "wrote " << out << "\n";
    return exit_ok;
}

int cmd_run(const CommonOpts& opts) {
    const ExperimentConfig cfg = load_config(opts);
    const ExperimentResult result = run_experiment(cfg);
    for (const auto& run : result.runs) {
        std::cout << "L=" << run.config.num_paths
                  << "  in-band MSE: " << run.summary.mean_inband_mse_db << " dB";
        if (run.summary.extrap_mse_db_at_70mhz)
            std::cout << "  MSE@70MHz: " << *run.summary.extrap_mse_db_at_70mhz << " dB";
        std::cout << "  max RBG: " << run.summary.max_rbg_db << " dB\n";
    }
    std::cout << "artifacts in " << cfg.out_dir << "\n";
    return exit_ok;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"SIMO multipath extraction and frequency-band extrapolation"};
    app.require_subcommand(1);

    CommonOpts synth_opts, est_opts, ext_opts, eval_opts, run_opts;
    std::string channel_path, pattern_path, paths_path, truth_path, est_path;
    double grid_start = 3.325e9, grid_step = 0.125e6;
    std::size_t grid_count = 2801;

    CLI::App* synth = app.add_subcommand("synth", "generate a scenario channel + pattern");
    add_common(synth, synth_opts);

    CLI::App* estimate_cmd =
        app.add_subcommand("estimate", "extract path parameters from a training band");
    estimate_cmd->add_option("--channel", channel_path, "CHX1 channel file")->required();
    estimate_cmd->add_option("--pattern", pattern_path, "PATX1 pattern file")->required();
    add_common(estimate_cmd, est_opts);

    CLI::App* extrap =
        app.add_subcommand("extrapolate", "synthesize a channel from a path file");
    extrap->add_option("--paths", paths_path, "path set JSON")->required();
    extrap->add_option("--pattern", pattern_path, "PATX1 pattern file")->required();
    extrap->add_option("--grid-start-hz", grid_start, "output grid start");
    extrap->add_option("--grid-step-hz", grid_step, "output grid step");
    extrap->add_option("--grid-count", grid_count, "output grid point count");
    add_common(extrap, ext_opts, false);

    CLI::App* eval = app.add_subcommand("evaluate", "MSE/RBG between two channels");
    eval->add_option("--truth", truth_path, "ground-truth CHX1")->required();
    eval->add_option("--estimated", est_path, "estimated CHX1")->required();
    add_common(eval, eval_opts, false);

    CLI::App* run = app.add_subcommand("run", "full pipeline from an experiment config");
    add_common(run, run_opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) // --help
            return app.exit(e);
        app.exit(e);
        return exit_validation;
    }

    try {
        if (synth->parsed())
            return cmd_synth(synth_opts);
        if (estimate_cmd->parsed())
            return cmd_estimate(est_opts, channel_path, pattern_path);
        if (extrap->parsed())
            return cmd_extrapolate(ext_opts, paths_path, pattern_path, grid_start, grid_step,
                                   grid_count);
        if (eval->parsed())
            return cmd_evaluate(eval_opts, truth_path, est_path);
        if (run->parsed())
            return cmd_run(run_opts);
    } catch (const validation_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_validation;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_validation;
    } catch (const io_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_io;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_numeric;
    }
    return exit_ok;
}
