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

#include "chanex/channel.hpp"
#include "chanex/sage.hpp"

#include <doctest.h>

using namespace chanex;

namespace {

// small array with purely geometric phase structure
EadfPattern test_pattern(std::size_t columns, std::size_t rows) {
    CylindricalArraySpec spec;
    spec.columns = columns;
    spec.rows = rows;
    spec.radius_m = 0.04;
    spec.element_spacing_m = 0.0428;
    spec.az_beamwidth_deg = 180.0;
    spec.el_beamwidth_deg = 180.0;
    spec.angle_step_deg = 10;
    spec.freqs = FrequencyGrid(3.325e9, 5e6, 9); // covers 3.325 - 3.365 GHz
    return eadf_from_pattern(make_synthetic_pattern(spec));
}

const FrequencyGrid train_grid(3.325e9, 0.125e6, 281); // the 35 MHz band

PathParams path(cx alpha, double tau_s, double phi_deg, double theta_deg) {
    PathParams p;
    p.alpha = alpha;
    p.tau_s = tau_s;
    p.phi_rad = deg2rad(phi_deg);
    p.theta_rad = deg2rad(theta_deg);
    return p;
}

double wrapped_deg(double a_rad, double b_rad) {
    return std::abs(rad2deg(std::remainder(a_rad - b_rad, 2.0 * pi)));
}

} // namespace

TEST_SUITE("sage") {

    TEST_CASE("noiseless single path is recovered to refinement resolution") {
        const EadfPattern pattern = test_pattern(4, 2);
        PathSet truth;
        truth.paths.push_back(path(cx(1.0, 0.0), 200e-9, 120.0, 90.0));
        const ChannelMatrix h = synthesize_channel(truth, pattern, train_grid);

        EstimatorConfig cfg;
        cfg.num_paths = 1;
        const EstimationReport report = estimate(h, pattern, cfg);
        REQUIRE(report.paths.size() == 1);
        const PathParams& got = report.paths.paths[0];
        CHECK(std::abs(got.tau_s - 200e-9) < 0.1e-9);
        CHECK(wrapped_deg(got.phi_rad, deg2rad(120.0)) < 0.5);
        CHECK(wrapped_deg(got.theta_rad, deg2rad(90.0)) < 0.5);
        CHECK(std::abs(std::abs(got.alpha) - 1.0) < 1e-3);
        CHECK(report.converged);
    }

    TEST_CASE("two separated equal-power paths are recovered") {
        const EadfPattern pattern = test_pattern(4, 2);
        PathSet truth;
        truth.paths.push_back(path(std::polar(1.0, 0.4), 150e-9, 60.0, 85.0));
        truth.paths.push_back(path(std::polar(1.0, -1.1), 450e-9, 210.0, 95.0));
        const ChannelMatrix h = synthesize_channel(truth, pattern, train_grid);

        EstimatorConfig cfg;
        cfg.num_paths = 2;
        const EstimationReport report = estimate(h, pattern, cfg);
        REQUIRE(report.paths.size() == 2);

        // canonical order is descending |alpha|; match greedily by delay
        for (const auto& t : truth.paths) {
            double best = 1e9;
            const PathParams* match = nullptr;
            for (const auto& g : report.paths.paths)
                if (std::abs(g.tau_s - t.tau_s) < best) {
                    best = std::abs(g.tau_s - t.tau_s);
                    match = &g;
                }
            REQUIRE(match != nullptr);
            CHECK(std::abs(match->tau_s - t.tau_s) < 0.1e-9);
            CHECK(wrapped_deg(match->phi_rad, t.phi_rad) < 0.5);
            CHECK(wrapped_deg(match->theta_rad, t.theta_rad) < 0.5);
            CHECK(std::abs(std::abs(match->alpha) - 1.0) < 1e-3);
        }
    }

    TEST_CASE("residual power never increases across cycles") {
        const EadfPattern pattern = test_pattern(4, 2);
        Rng rng(31);
        PathSet truth;
        for (int l = 0; l < 5; ++l)
            truth.paths.push_back(path(std::polar(rng.uniform(0.2, 1.0),
                                                  rng.uniform(0.0, 2 * pi)),
                                       rng.uniform(50e-9, 900e-9),
                                       rng.uniform(0.0, 360.0), rng.uniform(70.0, 110.0)));
        ChannelMatrix h = synthesize_channel(truth, pattern, train_grid);
        h = add_awgn(h, 15.0, 7);

        EstimatorConfig cfg;
        cfg.num_paths = 3; // under-modeled on purpose: no exact fit exists
        cfg.convergence_tol = 1e-12;
        const EstimationReport report = estimate(h, pattern, cfg);
        REQUIRE(report.residual_power_per_cycle.size() >= 2);
        for (std::size_t i = 1; i < report.residual_power_per_cycle.size(); ++i)
            CHECK(report.residual_power_per_cycle[i] <=
                  report.residual_power_per_cycle[i - 1] *
                      (1.0 + 1e-12));
    }

    TEST_CASE("estimates are deterministic") {
        const EadfPattern pattern = test_pattern(4, 2);
        PathSet truth;
        truth.paths.push_back(path(cx(0.8, 0.1), 300e-9, 200.0, 80.0));
        truth.paths.push_back(path(cx(0.2, -0.3), 600e-9, 80.0, 100.0));
        ChannelMatrix h = synthesize_channel(truth, pattern, train_grid);
        h = add_awgn(h, 20.0, 5);

        EstimatorConfig cfg;
        cfg.num_paths = 2;
        const EstimationReport a = estimate(h, pattern, cfg);
        const EstimationReport b = estimate(h, pattern, cfg);
        REQUIRE(a.paths.size() == b.paths.size());
        for (std::size_t l = 0; l < a.paths.size(); ++l) {
            CHECK(a.paths.paths[l].alpha == b.paths.paths[l].alpha);
            CHECK(a.paths.paths[l].tau_s == b.paths.paths[l].tau_s);
            CHECK(a.paths.paths[l].phi_rad == b.paths.paths[l].phi_rad);
        }
        CHECK(a.residual_power_per_cycle == b.residual_power_per_cycle);
    }

    TEST_CASE("recovered delay matches the data's phase slope") {
        // single port at the origin: the per-frequency phase carries only
        // the path delay, no geometric component
        CylindricalArraySpec spec;
        spec.columns = 1;
        spec.rows = 1;
        spec.radius_m = 0.0;
        spec.element_spacing_m = 0.0;
        spec.az_beamwidth_deg = 180.0;
        spec.el_beamwidth_deg = 180.0;
        spec.angle_step_deg = 10;
        spec.freqs = FrequencyGrid(3.325e9, 5e6, 9);
        const EadfPattern pattern = eadf_from_pattern(make_synthetic_pattern(spec));
        const double true_tau = 337e-9;
        PathSet truth;
        truth.paths.push_back(path(cx(1.0, 0.0), true_tau, 45.0, 90.0));
        const ChannelMatrix h = synthesize_channel(truth, pattern, train_grid);

        // unwrapped phase slope of one port across the band
        double slope_acc = 0.0;
        for (std::size_t fi = 1; fi < train_grid.count; ++fi) {
            const double dphase =
                std::arg(h.values(0, fi) * std::conj(h.values(0, fi - 1)));
            slope_acc += dphase;
        }
        const double slope = slope_acc / (static_cast<double>(train_grid.count - 1) *
                                          train_grid.step_hz);
        const double tau_from_slope = -slope / (2.0 * pi);

        EstimatorConfig cfg;
        cfg.num_paths = 1;
        const EstimationReport report = estimate(h, pattern, cfg);
        CHECK(std::abs(report.paths.paths[0].tau_s - tau_from_slope) < 0.1e-9);
        CHECK(std::abs(tau_from_slope - true_tau) < 0.05e-9);
    }

    TEST_CASE("degenerate and invalid inputs") {
        const EadfPattern pattern = test_pattern(2, 2);
        EstimatorConfig cfg;
        cfg.num_paths = 0;
        ChannelMatrix h(4, train_grid, ChannelMatrix::Role::chan);
        CHECK_THROWS_AS(estimate(h, pattern, cfg), validation_error);

        cfg.num_paths = 2;
        const EstimationReport report = estimate(h, pattern, cfg); // all-zero input
        CHECK(report.converged);
        CHECK(report.paths.size() == 2);
        for (const auto& p : report.paths.paths)
            CHECK(p.alpha == cx(0.0, 0.0));
        CHECK(report.residual_power_per_cycle == std::vector<double>{0.0});

        // identifiability guard: 3L must stay below M * N_f
        ChannelMatrix tiny(1, FrequencyGrid(3.325e9, 0.125e6, 5),
                           ChannelMatrix::Role::chan);
        tiny.values.fill(cx(1.0, 0.0));
        EstimatorConfig wide;
        wide.num_paths = 2;
        CHECK_THROWS_AS(
            estimate(tiny, test_pattern(1, 1), wide), validation_error);
    }

    TEST_CASE("oracle agrees with the grid-only estimator on a single path") {
        const EadfPattern pattern = test_pattern(4, 2);
        PathSet truth;
        truth.paths.push_back(path(std::polar(0.9, 0.7), 233e-9, 131.0, 87.0));
        const ChannelMatrix h = synthesize_channel(truth, pattern, train_grid);

        EstimatorConfig cfg;
        cfg.num_paths = 1;
        cfg.delay_search = {1e-6, 128, 0}; // refinement disabled
        cfg.angle_search = {12.0, 12.0, 0};
        cfg.convergence_tol = 1e-12;
        const EstimationReport report = estimate(h, pattern, cfg);
        const PathParams oracle =
            single_path_ml_oracle(h, pattern, cfg.delay_search, cfg.angle_search);

        CHECK(report.paths.paths[0].tau_s == oracle.tau_s);
        CHECK(report.paths.paths[0].phi_rad == oracle.phi_rad);
        CHECK(report.paths.paths[0].theta_rad == oracle.theta_rad);
    }

    TEST_CASE("oracle on all-zero data returns zero amplitude") {
        const EadfPattern pattern = test_pattern(2, 2);
        ChannelMatrix h(4, train_grid, ChannelMatrix::Role::chan);
        const PathParams p =
            single_path_ml_oracle(h, pattern, {1e-6, 32, 0}, {30.0, 30.0, 0});
        CHECK(p.alpha == cx(0.0, 0.0));
    }

    TEST_CASE("oracle finds an exact on-grid fit") {
        const EadfPattern pattern = test_pattern(4, 2);
        const DelaySearchSpec dspec{1e-6, 101, 0}; // grid step 10 ns
        const AngleSearchSpec aspec{10.0, 10.0, 0};
        PathSet truth;
        truth.paths.push_back(path(std::polar(0.8, -0.4), 250e-9, 130.0, 80.0));
        const ChannelMatrix h = synthesize_channel(truth, pattern, train_grid);

        const PathParams got = single_path_ml_oracle(h, pattern, dspec, aspec);
        CHECK(got.tau_s == doctest::Approx(250e-9).epsilon(1e-12));
        CHECK(got.phi_rad == doctest::Approx(deg2rad(130.0)).epsilon(1e-12));
        CHECK(got.theta_rad == doctest::Approx(deg2rad(80.0)).epsilon(1e-12));

        PathSet fitted;
        fitted.paths.push_back(got);
        const ChannelMatrix recon = synthesize_channel(fitted, pattern, train_grid);
        const double residual =
            std::pow(arma::norm(h.values - recon.values, "fro"), 2);
        const double input = std::pow(arma::norm(h.values, "fro"), 2);
        CHECK(residual <= 1e-20 * input);
    }

    TEST_CASE("oracle rejects oversized grids") {
        const EadfPattern pattern = test_pattern(2, 2);
        ChannelMatrix h(4, train_grid, ChannelMatrix::Role::chan);
        h.values.fill(cx(1.0, 0.0));
        CHECK_THROWS_AS(
            single_path_ml_oracle(h, pattern, {2e-6, 2048, 0}, {2.0, 2.0, 0}),
            validation_error);
    }

    TEST_CASE("residual stop mode can end initialization early") {
        const EadfPattern pattern = test_pattern(4, 2);
        PathSet truth;
        truth.paths.push_back(path(cx(1.0, 0.0), 200e-9, 120.0, 90.0));
        const ChannelMatrix h = synthesize_channel(truth, pattern, train_grid);

        EstimatorConfig cfg;
        cfg.num_paths = 6;
        cfg.residual_stop_fraction = 1e-8;
        const EstimationReport report = estimate(h, pattern, cfg);
        CHECK(report.paths.size() < 6); // one dominant path explains the data
    }

    TEST_CASE("config json knobs are validated") {
        EstimatorConfig cfg;
        cfg.max_cycles = 0;
        CHECK_THROWS_AS(cfg.validate(), validation_error);
        cfg = EstimatorConfig{};
        cfg.convergence_tol = 0.0;
        CHECK_THROWS_AS(cfg.validate(), validation_error);
        cfg = EstimatorConfig{};
        cfg.angle_search.azimuth_step_deg = 120.0;
        CHECK_THROWS_AS(cfg.validate(), validation_error);
    }
}
