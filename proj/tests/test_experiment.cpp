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

#include <doctest.h>
#include <filesystem>

using namespace chanex;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path dir;
    TempDir() {
        dir = fs::temp_directory_path() /
              ("chanex_exp_" + std::to_string(::getpid()) + "_" +
               std::to_string(counter++));
    }
    ~TempDir() { fs::remove_all(dir); }
    std::string operator/(const char* name) const { return (dir / name).string(); }
    std::string str() const { return dir.string(); }
    static inline int counter = 0;
};

// tiny but complete configuration that runs in well under a second
std::string tiny_config(const std::string& out_dir, const char* scenario = "chamber_los") {
    return std::string(R"({
      "scenario": ")") +
           scenario + R"(",
      "grid": {"freq_start_hz": 3.325e9, "freq_step_hz": 0.25e6, "freq_count": 121},
      "training": {"start_index": 0, "count": 41},
      "pattern": {"synthetic": {
          "columns": 2, "rows": 2, "radius_m": 0.02, "element_spacing_m": 0.0428,
          "angle_step_deg": 15,
          "calib_freq_start_hz": 3.325e9, "calib_freq_step_hz": 5e6,
          "calib_freq_count": 7}},
      "estimators": [{"num_paths": 2, "max_cycles": 4,
                      "delay_search": {"max_delay_s": 1e-6, "coarse_grid_points": 512},
                      "angle_search": {"azimuth_step_deg": 6.0, "elevation_step_deg": 6.0}}],
      "seed": 7,
      "out_dir": ")" +
           out_dir + R"("
    })";
}

} // namespace

TEST_SUITE("experiment") {

    TEST_CASE("empty config yields the full-scale defaults") {
        const ExperimentConfig cfg = validate_config("{}");
        CHECK(cfg.scenario == ScenarioKind::outdoor_los);
        CHECK(cfg.grid.start_hz == 3.325e9);
        CHECK(cfg.grid.step_hz == 0.125e6);
        CHECK(cfg.grid.count == 2801);
        CHECK(cfg.training.start_index == 0);
        CHECK(cfg.training.count == 281);
        REQUIRE(cfg.estimators.size() == 1);
        CHECK(cfg.estimators[0].num_paths == 4);
        CHECK(cfg.seed == 1);
        const auto& spec = std::get<CylindricalArraySpec>(cfg.pattern);
        CHECK(spec.columns == 16);
        CHECK(spec.rows == 4);
        CHECK(spec.freqs.step_hz == 1e6);
        CHECK(spec.freqs.last_hz() >= cfg.grid.last_hz());
    }

    TEST_CASE("config validation failures") {
        CHECK_THROWS_AS(validate_config("not json"), validation_error);
        CHECK_THROWS_AS(validate_config(R"({"surprise": 1})"), validation_error);
        CHECK_THROWS_AS(validate_config(R"({"training": {"count": 1}})"), validation_error);
        CHECK_THROWS_AS(validate_config(R"({"seed": -1})"), validation_error);
        CHECK_THROWS_AS(validate_config(R"({"estimators": []})"), validation_error);
        CHECK_THROWS_AS(
            validate_config(R"({"scenario": "outdoor_los", "channel_file": "x.chx1"})"),
            validation_error);
        CHECK_THROWS_AS(validate_config(R"({"scenario": "somewhere"})"), validation_error);
        // duplicate L values collide in artifact names
        CHECK_THROWS_AS(
            validate_config(R"({"estimators": [{"num_paths": 4}, {"num_paths": 4}]})"),
            validation_error);
    }

    TEST_CASE("config survives a serialization round trip") {
        TempDir tmp;
        const ExperimentConfig cfg = validate_config(tiny_config(tmp.str()));
        const ExperimentConfig rt = validate_config(config_to_json(cfg));
        CHECK(rt.scenario == cfg.scenario);
        CHECK(rt.grid.same_as(cfg.grid));
        CHECK(rt.training.start_index == cfg.training.start_index);
        CHECK(rt.training.count == cfg.training.count);
        CHECK(rt.seed == cfg.seed);
        REQUIRE(rt.estimators.size() == cfg.estimators.size());
        CHECK(rt.estimators[0].num_paths == cfg.estimators[0].num_paths);
    }

    TEST_CASE("run produces the full artifact set") {
        TempDir tmp;
        const ExperimentConfig cfg = validate_config(tiny_config(tmp.str()));
        const ExperimentResult result = run_experiment(cfg);

        REQUIRE(result.runs.size() == 1);
        CHECK(fs::exists(tmp / "config.json"));
        CHECK(fs::exists(tmp / "h_chan.chx1"));
        CHECK(fs::exists(std::string(tmp / "h_chan.chx1") + ".bin"));
        CHECK(fs::exists(tmp / "paths_truth.json"));
        CHECK(fs::exists(tmp / "h_sage_L2.chx1"));
        CHECK(fs::exists(tmp / "paths_L2.json"));
        CHECK(fs::exists(tmp / "metrics_L2.csv"));
        CHECK(fs::exists(tmp / "summary.json"));
        CHECK(fs::exists(tmp / "plots/mse.svg"));
        CHECK(fs::exists(tmp / "plots/rbg.svg"));

        // ground truth is power-normalized over the training band
        const double band_power = band_mean_power(result.h_chan, cfg.training);
        CHECK(band_power == doctest::Approx(1.0).epsilon(0.05)); // noise on top

        // chamber fit should be essentially exact in band
        CHECK(result.runs[0].summary.mean_inband_mse_db < -25.0);
    }

    TEST_CASE("summaries are recomputable from the stored series") {
        TempDir tmp;
        const ExperimentConfig cfg = validate_config(tiny_config(tmp.str()));
        const ExperimentResult result = run_experiment(cfg);
        const ExperimentSummary again = summarize(result.runs[0].series);
        CHECK(again.mean_inband_mse_db == result.runs[0].summary.mean_inband_mse_db);
        CHECK(again.max_rbg_db == result.runs[0].summary.max_rbg_db);
        CHECK(again.extrap_mse_db_at_40mhz.has_value() ==
              result.runs[0].summary.extrap_mse_db_at_40mhz.has_value());
    }

    TEST_CASE("metric rows match a direct recomputation from stored channels") {
        TempDir tmp;
        const ExperimentConfig cfg = validate_config(tiny_config(tmp.str()));
        const ExperimentResult result = run_experiment(cfg);

        const ChannelMatrix h_chan = read_chx1(tmp / "h_chan.chx1");
        const ChannelMatrix h_sage = read_chx1(tmp / "h_sage_L2.chx1");
        for (std::size_t fi : {std::size_t(0), std::size_t(20), std::size_t(40)}) {
            const double direct = to_db(mse_at(h_chan, h_sage, fi));
            CHECK(std::abs(direct - result.runs[0].series.mse_db[fi]) < 1e-9);
        }
    }

    TEST_CASE("runs are reproducible byte for byte") {
        TempDir tmp1, tmp2;
        ExperimentConfig cfg1 = validate_config(tiny_config(tmp1.str()));
        ExperimentConfig cfg2 = validate_config(tiny_config(tmp2.str()));
        run_experiment(cfg1);
        run_experiment(cfg2);
        CHECK(read_text_file(tmp1 / "metrics_L2.csv") ==
              read_text_file(tmp2 / "metrics_L2.csv"));
        CHECK(read_text_file(tmp1 / "paths_L2.json") ==
              read_text_file(tmp2 / "paths_L2.json"));
    }

    TEST_CASE("missing input files abort before any output is written") {
        TempDir tmp;
        ExperimentConfig cfg = validate_config(
            R"({"channel_file": "/nonexistent/h.chx1",
                "grid": {"freq_start_hz": 3.325e9, "freq_step_hz": 0.25e6,
                         "freq_count": 121},
                "training": {"start_index": 0, "count": 41},
                "out_dir": ")" +
            tmp.str() + R"("})");
        CHECK_THROWS_AS(run_experiment(cfg), validation_error);
        CHECK(!fs::exists(tmp.dir));
    }

    TEST_CASE("plots contain one polyline per estimator with all vertices") {
        TempDir tmp;
        ExperimentConfig cfg = validate_config(tiny_config(tmp.str()));
        EstimatorConfig second = cfg.estimators[0];
        second.num_paths = 1;
        second.max_cycles = 3;
        cfg.estimators.insert(cfg.estimators.begin(), second);
        REQUIRE(cfg.estimators.size() == 2);
        run_experiment(cfg);

        const std::string svg = read_text_file(tmp / "plots/mse.svg");
        std::size_t polylines = 0, pos = 0;
        while ((pos = svg.find("<polyline", pos)) != std::string::npos) {
            ++polylines;
            pos += 9;
        }
        CHECK(polylines == 2);

        // vertex count of the first polyline equals the grid length
        const std::size_t points = svg.find("points=\"");
        const std::size_t end = svg.find('"', points + 8);
        const std::string pts = svg.substr(points + 8, end - points - 8);
        const std::size_t vertices =
            static_cast<std::size_t>(std::count(pts.begin(), pts.end(), ','));
        CHECK(vertices == cfg.grid.count);

        // distinct legend labels
        CHECK(svg.find("L = 1") != std::string::npos);
        CHECK(svg.find("L = 2") != std::string::npos);

        ExperimentResult empty;
        CHECK_THROWS_AS(emit_plots(empty, tmp.str()), validation_error);
    }

    TEST_CASE("file-based channels pass through b2b compensation") {
        TempDir tmp;
        fs::create_directories(tmp.dir);

        // synthesize a channel, distort it with a known b2b, store both
        const ExperimentConfig gen = validate_config(tiny_config(tmp.str()));
        const ExperimentResult golden = run_experiment(gen);

        const B2bResponse b2b = synthetic_b2b(gen.grid, 3);
        ChannelMatrix measured = golden.h_chan;
        for (std::size_t fi = 0; fi < measured.freqs.count; ++fi)
            measured.values.col(fi) *= b2b.values[fi];
        measured.role = ChannelMatrix::Role::measured;
        write_chx1(tmp / "measured.chx1", measured);
        write_b2b_chx1(tmp / "b2b.chx1", b2b);

        TempDir out2;
        const std::string file_cfg = std::string(R"({
          "channel_file": ")") + (tmp / "measured.chx1") + R"(",
          "b2b_file": ")" + (tmp / "b2b.chx1") +
                                     R"(",
          "grid": {"freq_start_hz": 3.325e9, "freq_step_hz": 0.25e6, "freq_count": 121},
          "training": {"start_index": 0, "count": 41},
          "pattern": {"synthetic": {
              "columns": 2, "rows": 2, "radius_m": 0.02, "element_spacing_m": 0.0428,
              "angle_step_deg": 15,
              "calib_freq_start_hz": 3.325e9, "calib_freq_step_hz": 5e6,
              "calib_freq_count": 7}},
          "estimators": [{"num_paths": 2, "max_cycles": 4,
                          "delay_search": {"max_delay_s": 1e-6,
                                           "coarse_grid_points": 512},
                          "angle_search": {"azimuth_step_deg": 6.0,
                                           "elevation_step_deg": 6.0}}],
          "seed": 7,
          "out_dir": ")" + out2.str() + R"("})";
        const ExperimentResult result = run_experiment(validate_config(file_cfg));

        // after compensation the channel matches the original up to the
        // file-mode renormalization (the golden run normalized before adding
        // noise, the file path sees the noisy band power)
        ChannelMatrix renorm = golden.h_chan;
        renorm.values *= 1.0 / std::sqrt(band_mean_power(renorm, gen.training));
        CHECK(arma::norm(result.h_chan.values - renorm.values, "fro") /
                  arma::norm(renorm.values, "fro") < 1e-9);
        CHECK(result.runs[0].summary.mean_inband_mse_db ==
              doctest::Approx(golden.runs[0].summary.mean_inband_mse_db).epsilon(1e-4));
    }
}
