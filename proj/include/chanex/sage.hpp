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
#include "chanex/eadf.hpp"
#include "chanex/path_model.hpp"

#include <armadillo>
#include <cstdint>
#include <optional>
#include <vector>

namespace chanex {

struct DelaySearchSpec {
    double max_delay_s = 2e-6;
    std::size_t coarse_grid_points = 2048;
    std::size_t refinement_levels = 4;
};

struct AngleSearchSpec {
    double azimuth_step_deg = 2.0;
    double elevation_step_deg = 2.0;
    std::size_t refinement_levels = 4;
};

struct EstimatorConfig {
    std::size_t num_paths = 4;
    DelaySearchSpec delay_search;
    AngleSearchSpec angle_search;
    std::size_t max_cycles = 10;
    double convergence_tol = 1e-6; // residual change relative to input power
    std::uint64_t seed = 0;
    std::size_t multi_start = 1; // > 1 jitters the delay grid per restart
    std::optional<double> residual_stop_fraction; // optional early stop during init

    void validate() const;
};

struct EstimationReport {
    PathSet paths;
    std::vector<double> residual_power_per_cycle; // entry 0 is post-initialization
    bool converged = false;
    std::size_t cycles_used = 0;
};

/// SAGE parameter extraction: successive-cancellation initialization, then
/// cyclic per-path coordinate maximization (delay by correlation over a
/// grid with dichotomous refinement, azimuth/elevation jointly over an
/// angle grid with refinement, amplitude by closed-form least squares).
/// Every accept decision compares exact objective values and always
/// includes the path's current parameters, so the residual power cannot
/// increase across updates.
///
/// Construction precomputes search tables for one (pattern, training grid,
/// config) combination; estimate() can then be called on many channels.
/// The pattern must outlive the estimator.
class SageEstimator {
  public:
    SageEstimator(const EadfPattern& pattern, const FrequencyGrid& train_freqs,
                  const EstimatorConfig& cfg);

    EstimationReport estimate(const ChannelMatrix& h_train) const;

  private:
    struct DelayTable {
        std::vector<double> grid;
        arma::cx_mat phasor; // (n_freq x n_delay), exp(+2*pi*j*f*tau)
    };

    struct PathState {
        PathParams params;
        arma::cx_mat contribution; // alpha * b, (M x n_freq)
    };

    arma::cx_mat eval_ports_local(double phi, double theta) const;
    double bnorm2_from_ports(const arma::cx_mat& A) const;
    cx inner_product(const arma::cx_mat& A, const arma::cx_mat& z) const;
    arma::cx_mat aggregate_to_calib(const arma::cx_mat& y) const;
    arma::cx_vec delay_correlation_input(const arma::cx_mat& A, const arma::cx_mat& x) const;
    cx delay_correlation(const arma::cx_vec& g, double tau) const;
    void update_delay(PathState& path, const arma::cx_mat& x, const DelayTable& table) const;
    void update_angles(PathState& path, const arma::cx_mat& x) const;
    void update_amplitude(PathState& path, const arma::cx_mat& x) const;
    PathState fit_new_path(const arma::cx_mat& residual, const DelayTable& table) const;
    EstimationReport run_once(const arma::cx_mat& x, const DelayTable& table) const;
    DelayTable make_delay_table(double grid_offset_fraction) const;

    const EadfPattern* pattern_;
    FrequencyGrid freqs_;
    EstimatorConfig cfg_;

    std::size_t num_ports_ = 0;
    std::size_t k0_ = 0, k1_ = 0;      // calibration index range of the band
    std::size_t n_calib_ = 1;          // k1 - k0 + 1
    std::vector<std::size_t> br_;      // per frequency: local bracket index
    std::vector<double> w_;            // per frequency: interpolation weight
    arma::vec w1_, w2_, wx_;           // per bracket pair: sum (1-w)^2, w^2, 2w(1-w)
    DelayTable delay_;
    std::vector<double> az_grid_, el_grid_; // radians
    arma::cx_mat basis_az_, basis_el_;      // harmonic bases of the angle grid
    arma::mat bnorm2_grid_;                 // (n_az_grid x n_el_grid)
    arma::cx_mat stacked_coeff_; // all (port, calib) coefficient blocks stacked
                                 // row-wise so one angle evaluation is two gemvs
};

/// One-shot convenience wrapper around SageEstimator.
EstimationReport estimate(const ChannelMatrix& h_train, const EadfPattern& pattern,
                          const EstimatorConfig& cfg);

/// Independent brute-force reference: exhaustively evaluates the
/// single-path residual over the full (delay x azimuth x elevation) grid
/// cross-product (refinement fields are ignored) and returns the global
/// grid optimum with the closed-form amplitude. Ties resolve to the lowest
/// delay, then lowest azimuth index, then lowest elevation index. The
/// candidate budget is capped at 10^6.
PathParams single_path_ml_oracle(const ChannelMatrix& h_train, const EadfPattern& pattern,
                                 const DelaySearchSpec& delay_grid,
                                 const AngleSearchSpec& angle_grid);

} // namespace chanex
