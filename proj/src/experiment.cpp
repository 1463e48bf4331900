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
#include "chanex/svg.hpp"

#include <filesystem>
#include <json.hpp>
#include <set>

namespace chanex {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t noise_salt = 0xa3;
constexpr std::uint64_t calib_salt = 0xca;

FrequencyGrid default_grid() { return FrequencyGrid(3.325e9, 0.125e6, 2801); }

// calibration grid at 1 MHz covering the channel grid span
FrequencyGrid default_calib_grid(const FrequencyGrid& grid) {
    const double step = 1e6;
    const auto n = static_cast<std::size_t>(std::ceil(grid.span_hz() / step - 1e-9)) + 1;
    return FrequencyGrid(grid.start_hz, step, std::max<std::size_t>(n, 2));
}

CylindricalArraySpec default_pattern_spec(const FrequencyGrid& grid) {
    CylindricalArraySpec spec;
    spec.freqs = default_calib_grid(grid);
    return spec;
}

void require_keys(const json& j, std::initializer_list<const char*> known,
                  const std::string& where) {
    for (const auto& [key, value] : j.items()) {
        bool found = false;
        for (const char* k : known)
            if (key == k)
                found = true;
        if (!found)
            throw validation_error("unknown key \"" + key + "\" in " + where);
    }
}

double require_number(const json& j, const char* key, const std::string& where) {
    if (!j.contains(key) || !j[key].is_number())
        throw validation_error(where + "." + key + " must be a number");
    return j[key].get<double>();
}

std::size_t get_size(const json& j, const char* key, std::size_t fallback,
                     const std::string& where) {
    if (!j.contains(key))
        return fallback;
    if (!j[key].is_number_unsigned())
        throw validation_error(where + "." + key + " must be a non-negative integer");
    return j[key].get<std::size_t>();
}

double get_number(const json& j, const char* key, double fallback, const std::string& where) {
    if (!j.contains(key))
        return fallback;
    if (!j[key].is_number())
        throw validation_error(where + "." + key + " must be a number");
    return j[key].get<double>();
}

FrequencyGrid grid_from_json(const json& j, const std::string& where) {
    require_keys(j, {"freq_start_hz", "freq_step_hz", "freq_count"}, where);
    try {
        return FrequencyGrid(require_number(j, "freq_start_hz", where),
                             require_number(j, "freq_step_hz", where),
                             get_size(j, "freq_count", 0, where));
    } catch (const validation_error&) {
        throw;
    } catch (const std::exception& e) {
        throw validation_error(where + ": " + e.what());
    }
}

CylindricalArraySpec synthetic_from_json(const json& j, const FrequencyGrid& grid) {
    const std::string where = "pattern.synthetic";
    require_keys(j,
                 {"columns", "rows", "radius_m", "element_spacing_m", "az_beamwidth_deg",
                  "el_beamwidth_deg", "first_column_azimuth_deg", "angle_step_deg",
                  "calib_freq_start_hz", "calib_freq_step_hz", "calib_freq_count"},
                 where);
    CylindricalArraySpec spec = default_pattern_spec(grid);
    spec.columns = get_size(j, "columns", spec.columns, where);
    spec.rows = get_size(j, "rows", spec.rows, where);
    spec.radius_m = get_number(j, "radius_m", spec.radius_m, where);
    spec.element_spacing_m = get_number(j, "element_spacing_m", spec.element_spacing_m, where);
    spec.az_beamwidth_deg = get_number(j, "az_beamwidth_deg", spec.az_beamwidth_deg, where);
    spec.el_beamwidth_deg = get_number(j, "el_beamwidth_deg", spec.el_beamwidth_deg, where);
    spec.first_column_azimuth_deg =
        get_number(j, "first_column_azimuth_deg", spec.first_column_azimuth_deg, where);
    spec.angle_step_deg = get_size(j, "angle_step_deg", spec.angle_step_deg, where);
    if (j.contains("calib_freq_start_hz") || j.contains("calib_freq_step_hz") ||
        j.contains("calib_freq_count")) {
        spec.freqs = FrequencyGrid(
            get_number(j, "calib_freq_start_hz", spec.freqs.start_hz, where),
            get_number(j, "calib_freq_step_hz", spec.freqs.step_hz, where),
            get_size(j, "calib_freq_count", spec.freqs.count, where));
    }
    return spec;
}

} // namespace

void ExperimentConfig::validate() const {
    if (scenario.has_value() == channel_file.has_value())
        throw validation_error("config: exactly one channel source (scenario or "
                               "channel_file) must be set");
    if (b2b_file && !channel_file)
        throw validation_error("config: b2b_file requires channel_file");
    if (grid.count < 2)
        throw validation_error("config: grid.freq_count must be >= 2");
    training.check_within(grid);
    if (estimators.empty())
        throw validation_error("config: at least one estimator is required");
    std::set<std::size_t> seen;
    for (const auto& e : estimators) {
        e.validate();
        if (!seen.insert(e.num_paths).second)
            throw validation_error(
                "config: estimators must use distinct num_paths (artifact names key on L)");
    }
    impairment_overrides.validate();
    if (const auto* spec = std::get_if<CylindricalArraySpec>(&pattern)) {
        if (spec->columns < 1 || spec->rows < 1)
            throw validation_error("config: pattern geometry must have columns, rows >= 1");
    }
    if (scenario && *scenario == ScenarioKind::outdoor_plos &&
        !std::holds_alternative<CylindricalArraySpec>(pattern))
        throw validation_error(
            "config: outdoor_plos needs a synthetic pattern (mask follows the geometry)");
    if (impairment_overrides.spherical_source_distance_m &&
        !std::holds_alternative<CylindricalArraySpec>(pattern))
        throw validation_error(
            "config: spherical wavefront needs a synthetic pattern (element positions)");
    if (out_dir.empty())
        throw validation_error("config: out_dir must not be empty");
}

ExperimentConfig validate_config(const std::string& raw_json) {
    json j = json::parse(raw_json, nullptr, false);
    if (j.is_discarded())
        throw validation_error("config: malformed JSON");
    if (!j.is_object())
        throw validation_error("config: top level must be a JSON object");
    require_keys(j,
                 {"scenario", "channel_file", "b2b_file", "pattern", "grid", "training",
                  "estimators", "impairments", "seed", "out_dir", "absolute_mse"},
                 "config");

    ExperimentConfig cfg;
    cfg.grid = j.contains("grid") ? grid_from_json(j["grid"], "config.grid") : default_grid();

    if (j.contains("channel_file") && !j["channel_file"].is_null()) {
        cfg.channel_file = j["channel_file"].get<std::string>();
        if (j.contains("b2b_file") && !j["b2b_file"].is_null())
            cfg.b2b_file = j["b2b_file"].get<std::string>();
        if (j.contains("scenario") && !j["scenario"].is_null())
            throw validation_error("config: scenario and channel_file are exclusive");
    } else {
        const std::string name = j.contains("scenario") && !j["scenario"].is_null()
                                     ? j["scenario"].get<std::string>()
                                     : "outdoor_los";
        cfg.scenario = scenario_from_name(name);
    }

    if (j.contains("training")) {
        require_keys(j["training"], {"start_index", "count"}, "config.training");
        const std::size_t start = get_size(j["training"], "start_index", 0, "config.training");
        const std::size_t count = get_size(j["training"], "count", 281, "config.training");
        if (count < 2)
            throw validation_error("config.training.count must be >= 2");
        cfg.training = BandSelection(start, count);
    } else {
        cfg.training = BandSelection(0, std::min<std::size_t>(281, cfg.grid.count));
    }

    if (j.contains("pattern")) {
        const json& p = j["pattern"];
        require_keys(p, {"synthetic", "file"}, "config.pattern");
        if (p.contains("file") && p.contains("synthetic"))
            throw validation_error("config.pattern: synthetic and file are exclusive");
        if (p.contains("file"))
            cfg.pattern = p["file"].get<std::string>();
        else if (p.contains("synthetic"))
            cfg.pattern = synthetic_from_json(p["synthetic"], cfg.grid);
        else
            throw validation_error("config.pattern: needs synthetic or file");
    } else {
        cfg.pattern = default_pattern_spec(cfg.grid);
    }

    if (j.contains("estimators")) {
        if (!j["estimators"].is_array() || j["estimators"].empty())
            throw validation_error("config.estimators must be a non-empty array");
        for (const auto& e : j["estimators"])
            cfg.estimators.push_back(estimator_config_from_json(e.dump()));
    } else {
        cfg.estimators.push_back(EstimatorConfig{});
    }

    if (j.contains("impairments")) {
        const json& imp = j["impairments"];
        require_keys(imp,
                     {"snr_db", "calib_phase_sigma_deg", "calib_gain_sigma_db",
                      "spherical_source_distance_m"},
                     "config.impairments");
        if (imp.contains("snr_db")) {
            if (imp["snr_db"].is_null())
                cfg.disable_noise = true;
            else
                cfg.impairment_overrides.snr_db =
                    require_number(imp, "snr_db", "config.impairments");
        }
        if (imp.contains("calib_phase_sigma_deg") && !imp["calib_phase_sigma_deg"].is_null())
            cfg.impairment_overrides.calib_phase_sigma_deg =
                require_number(imp, "calib_phase_sigma_deg", "config.impairments");
        if (imp.contains("calib_gain_sigma_db") && !imp["calib_gain_sigma_db"].is_null())
            cfg.impairment_overrides.calib_gain_sigma_db =
                require_number(imp, "calib_gain_sigma_db", "config.impairments");
        if (imp.contains("spherical_source_distance_m") &&
            !imp["spherical_source_distance_m"].is_null())
            cfg.impairment_overrides.spherical_source_distance_m =
                require_number(imp, "spherical_source_distance_m", "config.impairments");
    }

    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned())
            throw validation_error("config.seed must be a non-negative integer");
        cfg.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("out_dir"))
        cfg.out_dir = j["out_dir"].get<std::string>();
    if (j.contains("absolute_mse")) {
        if (!j["absolute_mse"].is_boolean())
            throw validation_error("config.absolute_mse must be a boolean");
        cfg.absolute_mse = j["absolute_mse"].get<bool>();
    }

    cfg.validate();
    return cfg;
}

std::string config_to_json(const ExperimentConfig& cfg) {
    json j;
    if (cfg.scenario)
        j["scenario"] = scenario_name(*cfg.scenario);
    if (cfg.channel_file)
        j["channel_file"] = *cfg.channel_file;
    if (cfg.b2b_file)
        j["b2b_file"] = *cfg.b2b_file;
    j["grid"] = {{"freq_start_hz", cfg.grid.start_hz},
                 {"freq_step_hz", cfg.grid.step_hz},
                 {"freq_count", cfg.grid.count}};
    j["training"] = {{"start_index", cfg.training.start_index},
                     {"count", cfg.training.count}};
    if (const auto* spec = std::get_if<CylindricalArraySpec>(&cfg.pattern)) {
        j["pattern"]["synthetic"] = {{"columns", spec->columns},
                                     {"rows", spec->rows},
                                     {"radius_m", spec->radius_m},
                                     {"element_spacing_m", spec->element_spacing_m},
                                     {"az_beamwidth_deg", spec->az_beamwidth_deg},
                                     {"el_beamwidth_deg", spec->el_beamwidth_deg},
                                     {"first_column_azimuth_deg",
                                      spec->first_column_azimuth_deg},
                                     {"angle_step_deg", spec->angle_step_deg},
                                     {"calib_freq_start_hz", spec->freqs.start_hz},
                                     {"calib_freq_step_hz", spec->freqs.step_hz},
                                     {"calib_freq_count", spec->freqs.count}};
    } else {
        j["pattern"]["file"] = std::get<std::string>(cfg.pattern);
    }
    j["estimators"] = json::array();
    for (const auto& e : cfg.estimators)
        j["estimators"].push_back(json::parse(estimator_config_to_json(e)));
    json imp;
    if (cfg.disable_noise)
        imp["snr_db"] = nullptr;
    else if (cfg.impairment_overrides.snr_db)
        imp["snr_db"] = *cfg.impairment_overrides.snr_db;
    if (cfg.impairment_overrides.calib_phase_sigma_deg)
        imp["calib_phase_sigma_deg"] = *cfg.impairment_overrides.calib_phase_sigma_deg;
    if (cfg.impairment_overrides.calib_gain_sigma_db)
        imp["calib_gain_sigma_db"] = *cfg.impairment_overrides.calib_gain_sigma_db;
    if (cfg.impairment_overrides.spherical_source_distance_m)
        imp["spherical_source_distance_m"] =
            *cfg.impairment_overrides.spherical_source_distance_m;
    if (!imp.is_null())
        j["impairments"] = imp;
    j["seed"] = cfg.seed;
    j["out_dir"] = cfg.out_dir;
    j["absolute_mse"] = cfg.absolute_mse;
    return j.dump(2) + "\n";
}

ExperimentSummary summarize(const MetricSeries& s) {
    ExperimentSummary sum;
    const auto& band = s.training_band;
    const double band_end = s.freqs.freq_hz(band.start_index + band.count - 1);

    double acc = 0.0;
    for (std::size_t fi = band.start_index; fi < band.start_index + band.count; ++fi)
        acc += from_db(s.mse_db[fi]);
    sum.mean_inband_mse_db = to_db(acc / static_cast<double>(band.count));

    const auto window_mean = [&](double offset_hz) -> std::optional<double> {
        constexpr double half_window = 2.5e6;
        double a = 0.0;
        std::size_t n = 0;
        for (std::size_t fi = 0; fi < s.freqs.count; ++fi) {
            const double f = s.freqs.freq_hz(fi);
            if (f <= band_end)
                continue;
            if (std::abs(f - (band_end + offset_hz)) <= half_window) {
                a += from_db(s.mse_db[fi]);
                ++n;
            }
        }
        if (n == 0 || band_end + offset_hz > s.freqs.last_hz() + 1e-3)
            return std::nullopt;
        return to_db(a / static_cast<double>(n));
    };
    sum.extrap_mse_db_at_40mhz = window_mean(40e6);
    sum.extrap_mse_db_at_70mhz = window_mean(70e6);
    sum.extrap_mse_db_at_165mhz = window_mean(165e6);

    double far_acc = 0.0;
    std::size_t far_n = 0;
    for (std::size_t fi = 0; fi < s.freqs.count; ++fi) {
        if (s.freqs.freq_hz(fi) >= band_end + 100e6) {
            far_acc += from_db(s.mse_db[fi]);
            ++far_n;
        }
    }
    if (far_n > 0)
        sum.mean_extrap_mse_db_beyond_100mhz = to_db(far_acc / static_cast<double>(far_n));

    double max_rbg = 0.0;
    for (double v : s.rbg_db)
        max_rbg = std::max(max_rbg, std::min(v, 200.0));
    sum.max_rbg_db = max_rbg;
    return sum;
}

namespace {

json summary_to_json(const ExperimentSummary& s) {
    json j;
    j["mean_inband_mse_db"] = s.mean_inband_mse_db;
    const auto put = [&](const char* key, const std::optional<double>& v) {
        if (v)
            j[key] = *v;
        else
            j[key] = nullptr;
    };
    put("extrap_mse_db_at_40mhz", s.extrap_mse_db_at_40mhz);
    put("extrap_mse_db_at_70mhz", s.extrap_mse_db_at_70mhz);
    put("extrap_mse_db_at_165mhz", s.extrap_mse_db_at_165mhz);
    put("mean_extrap_mse_db_beyond_100mhz", s.mean_extrap_mse_db_beyond_100mhz);
    j["max_rbg_db"] = s.max_rbg_db;
    return j;
}

struct ChannelSetup {
    ChannelMatrix h_chan;  // ground truth used by metrics (noise included)
    PathSet truth_paths;   // scenario mode only
    ImpairmentSpec merged; // presets with overrides applied
};

ChannelSetup build_channel(const ExperimentConfig& cfg, const EadfPattern& true_pattern) {
    ChannelSetup setup;

    if (cfg.channel_file) {
        if (!fs::exists(*cfg.channel_file))
            throw validation_error("config: channel file not found: " + *cfg.channel_file);
        ChannelMatrix h = read_chx1(*cfg.channel_file);
        if (!h.freqs.same_as(cfg.grid))
            throw validation_error("config: channel file grid does not match config grid");
        if (cfg.b2b_file) {
            if (!fs::exists(*cfg.b2b_file))
                throw validation_error("config: b2b file not found: " + *cfg.b2b_file);
            h = compensate_b2b(h, read_b2b_chx1(*cfg.b2b_file));
        }
        if (!cfg.absolute_mse) {
            const double p = band_mean_power(h, cfg.training);
            if (p <= 0.0)
                throw numeric_error("channel has zero power in the training band");
            h.values *= 1.0 / std::sqrt(p);
        }
        h.role = ChannelMatrix::Role::chan;
        setup.h_chan = std::move(h);
        setup.merged = cfg.impairment_overrides;
        return setup;
    }

    const auto& spec = std::get<CylindricalArraySpec>(cfg.pattern);
    Scenario sc = make_scenario(*cfg.scenario, cfg.seed, spec.columns, spec.rows);

    // config overrides win over scenario presets
    ImpairmentSpec merged = sc.impairments;
    if (cfg.disable_noise)
        merged.snr_db.reset();
    else if (cfg.impairment_overrides.snr_db)
        merged.snr_db = cfg.impairment_overrides.snr_db;
    if (cfg.impairment_overrides.calib_phase_sigma_deg)
        merged.calib_phase_sigma_deg = cfg.impairment_overrides.calib_phase_sigma_deg;
    if (cfg.impairment_overrides.calib_gain_sigma_db)
        merged.calib_gain_sigma_db = cfg.impairment_overrides.calib_gain_sigma_db;
    if (cfg.impairment_overrides.spherical_source_distance_m)
        merged.spherical_source_distance_m =
            cfg.impairment_overrides.spherical_source_distance_m;
    setup.merged = merged;

    const PortGainMask* mask = sc.mask ? &*sc.mask : nullptr;
    ChannelMatrix h;
    if (merged.spherical_source_distance_m) {
        std::vector<std::array<double, 3>> positions(spec.num_ports());
        for (std::size_t m = 0; m < spec.num_ports(); ++m)
            positions[m] = spec.element_position(m);
        h = synthesize_channel_spherical(sc.paths, true_pattern, cfg.grid, positions,
                                         *merged.spherical_source_distance_m, mask);
    } else {
        h = synthesize_channel(sc.paths, true_pattern, cfg.grid, mask);
    }

    if (!cfg.absolute_mse) {
        const double p = band_mean_power(h, cfg.training);
        if (p <= 0.0)
            throw numeric_error("scenario produced zero power in the training band");
        const double s = 1.0 / std::sqrt(p);
        h.values *= s;
        sc.paths.scale(cx(s, 0.0));
    }
    if (merged.snr_db)
        h = add_awgn(h, *merged.snr_db, derive_seed(cfg.seed, noise_salt));

    setup.h_chan = std::move(h);
    setup.truth_paths = std::move(sc.paths);
    return setup;
}

} // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();

    // all inputs are checked before any output is created
    if (const auto* file = std::get_if<std::string>(&cfg.pattern)) {
        if (!fs::exists(*file))
            throw validation_error("config: pattern file not found: " + *file);
    }
    if (cfg.channel_file && !fs::exists(*cfg.channel_file))
        throw validation_error("config: channel file not found: " + *cfg.channel_file);
    if (cfg.b2b_file && !fs::exists(*cfg.b2b_file))
        throw validation_error("config: b2b file not found: " + *cfg.b2b_file);

    // true pattern
    EadfPattern true_pattern = [&] {
        if (const auto* spec = std::get_if<CylindricalArraySpec>(&cfg.pattern))
            return eadf_from_pattern(make_synthetic_pattern(*spec));
        return eadf_from_pattern(read_patx1(std::get<std::string>(cfg.pattern)));
    }();

    ExperimentResult result;
    result.config = cfg;

    ChannelSetup setup = build_channel(cfg, true_pattern);
    result.h_chan = setup.h_chan;
    result.truth_paths = setup.truth_paths;

    // the estimator sees the aged calibration for both estimation and
    // reconstruction; metrics always compare against the true channel
    const double phase_sigma = setup.merged.calib_phase_sigma_deg.value_or(0.0);
    const double gain_sigma = setup.merged.calib_gain_sigma_db.value_or(0.0);
    std::optional<EadfPattern> perturbed;
    const EadfPattern* est_pattern = &true_pattern;
    if (phase_sigma > 0.0 || gain_sigma > 0.0) {
        perturbed = perturb_pattern(true_pattern, phase_sigma, gain_sigma,
                                    derive_seed(cfg.seed, calib_salt));
        est_pattern = &*perturbed;
    }

    const ChannelMatrix h_train = select_band(result.h_chan, cfg.training);

    for (const auto& ecfg : cfg.estimators) {
        EstimatorRun run;
        run.config = ecfg;
        SageEstimator estimator(*est_pattern, h_train.freqs, ecfg);
        run.report = estimator.estimate(h_train);
        ChannelMatrix h_sage = synthesize_channel(run.report.paths, *est_pattern, cfg.grid,
                                                  nullptr, ChannelMatrix::Role::sage);
        run.series = sweep(result.h_chan, h_sage, cfg.training);
        run.summary = summarize(run.series);
        result.runs.push_back(std::move(run));

        // artifacts for this estimator
        const std::string tag = "L" + std::to_string(ecfg.num_paths);
        fs::create_directories(cfg.out_dir);
        write_chx1(cfg.out_dir + "/h_sage_" + tag + ".chx1", h_sage);
        write_text_file(cfg.out_dir + "/paths_" + tag + ".json",
                        report_to_json(result.runs.back().report));
        write_text_file(cfg.out_dir + "/metrics_" + tag + ".csv",
                        metrics_to_csv(result.runs.back().series));
    }

    fs::create_directories(cfg.out_dir);
    write_text_file(cfg.out_dir + "/config.json", config_to_json(cfg));
    write_chx1(cfg.out_dir + "/h_chan.chx1", result.h_chan);
    if (cfg.scenario)
        write_paths_json(cfg.out_dir + "/paths_truth.json", result.truth_paths);

    json summaries = json::object();
    for (const auto& run : result.runs)
        summaries["L" + std::to_string(run.config.num_paths)] =
            summary_to_json(run.summary);
    write_text_file(cfg.out_dir + "/summary.json", summaries.dump(2) + "\n");

    emit_plots(result, cfg.out_dir);
    return result;
}

void emit_plots(const ExperimentResult& result, const std::string& out_dir) {
    if (result.runs.empty())
        throw validation_error("emit_plots: no estimator runs in result");
    fs::create_directories(out_dir + "/plots");

    std::vector<PlotSeries> mse, rbg;
    for (const auto& run : result.runs) {
        const std::string label = "L = " + std::to_string(run.config.num_paths);
        mse.push_back({label, run.series.mse_db});
        rbg.push_back({label, run.series.rbg_db});
    }
    const auto& freqs = result.runs.front().series.freqs;
    const auto& band = result.runs.front().series.training_band;
    write_text_file(out_dir + "/plots/mse.svg",
                    render_line_plot("reconstruction / extrapolation error", freqs, band, mse,
                                     "MSE [dB]"));
    write_text_file(out_dir + "/plots/rbg.svg",
                    render_line_plot("reduction of beamforming gain", freqs, band, rbg,
                                     "RBG [dB]"));
}

} // namespace chanex
