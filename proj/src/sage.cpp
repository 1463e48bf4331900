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

#include "chanex/sage.hpp"

#include <limits>

namespace chanex {

namespace {

std::vector<double> make_angle_axis(double step_deg, double span_deg, bool closed) {
    if (!(step_deg > 0.0) || step_deg > 90.0)
        throw validation_error("angle search step must be in (0, 90] deg");
    std::vector<double> axis;
    const auto n = static_cast<std::size_t>(span_deg / step_deg + 1e-9);
    for (std::size_t i = 0; i <= n; ++i) {
        const double a = step_deg * static_cast<double>(i);
        if (!closed && a >= span_deg - 1e-9)
            break;
        if (a > span_deg + 1e-9)
            break;
        axis.push_back(deg2rad(a));
    }
    return axis;
}

} // namespace

void EstimatorConfig::validate() const {
    if (num_paths < 1)
        throw validation_error("EstimatorConfig: num_paths must be >= 1");
    if (max_cycles < 1)
        throw validation_error("EstimatorConfig: max_cycles must be >= 1");
    if (!(convergence_tol > 0.0))
        throw validation_error("EstimatorConfig: convergence_tol must be > 0");
    if (!(delay_search.max_delay_s > 0.0))
        throw validation_error("EstimatorConfig: max_delay_s must be > 0");
    if (delay_search.coarse_grid_points < 2)
        throw validation_error("EstimatorConfig: coarse_grid_points must be >= 2");
    if (!(angle_search.azimuth_step_deg > 0.0) || angle_search.azimuth_step_deg > 90.0 ||
        !(angle_search.elevation_step_deg > 0.0) || angle_search.elevation_step_deg > 90.0)
        throw validation_error("EstimatorConfig: angle steps must be in (0, 90] deg");
    if (multi_start < 1)
        throw validation_error("EstimatorConfig: multi_start must be >= 1");
    if (residual_stop_fraction && !(*residual_stop_fraction > 0.0))
        throw validation_error("EstimatorConfig: residual_stop_fraction must be > 0");
}

SageEstimator::SageEstimator(const EadfPattern& pattern, const FrequencyGrid& train_freqs,
                             const EstimatorConfig& cfg)
    : pattern_(&pattern), freqs_(train_freqs), cfg_(cfg) {
    cfg_.validate();
    if (train_freqs.count < 2)
        throw validation_error("SageEstimator: training grid needs >= 2 points");
    num_ports_ = pattern.num_ports;

    // calibration bracket per training frequency
    if (pattern.freqs.count == 1) {
        constexpr double slack = 1e-3;
        if (std::abs(freqs_.start_hz - pattern.freqs.start_hz) > slack ||
            std::abs(freqs_.last_hz() - pattern.freqs.start_hz) > slack)
            throw std::out_of_range("SageEstimator: pattern frequency span insufficient");
        k0_ = k1_ = 0;
        n_calib_ = 1;
        br_.assign(freqs_.count, 0);
        w_.assign(freqs_.count, 0.0);
    } else {
        k0_ = bracket(pattern.freqs, freqs_.start_hz).first;
        k1_ = bracket(pattern.freqs, freqs_.last_hz()).first + 1;
        n_calib_ = k1_ - k0_ + 1;
        br_.resize(freqs_.count);
        w_.resize(freqs_.count);
        w1_.zeros(n_calib_ - 1);
        w2_.zeros(n_calib_ - 1);
        wx_.zeros(n_calib_ - 1);
        for (std::size_t fi = 0; fi < freqs_.count; ++fi) {
            const auto [k, w] = bracket(pattern.freqs, freqs_.freq_hz(fi));
            br_[fi] = k - k0_;
            w_[fi] = w;
            w1_[br_[fi]] += (1.0 - w) * (1.0 - w);
            w2_[br_[fi]] += w * w;
            wx_[br_[fi]] += 2.0 * w * (1.0 - w);
        }
    }

    delay_ = make_delay_table(0.0);

    az_grid_ = make_angle_axis(cfg_.angle_search.azimuth_step_deg, 360.0, false);
    el_grid_ = make_angle_axis(cfg_.angle_search.elevation_step_deg, 180.0, true);

    basis_az_.set_size(pattern.n_az, az_grid_.size());
    for (std::size_t i = 0; i < az_grid_.size(); ++i)
        basis_az_.col(i) = eadf_basis(pattern.n_az, az_grid_[i]);
    basis_el_.set_size(pattern.n_el2, el_grid_.size());
    for (std::size_t j = 0; j < el_grid_.size(); ++j)
        basis_el_.col(j) = eadf_basis(pattern.n_el2, el_grid_[j]);

    // exact |b|^2 over the band for every node of the angle search grid
    bnorm2_grid_.zeros(az_grid_.size(), el_grid_.size());
    arma::mat sq_prev;
    arma::cx_mat s_prev;
    for (std::size_t m = 0; m < num_ports_; ++m) {
        for (std::size_t kl = 0; kl < n_calib_; ++kl) {
            arma::cx_mat s = basis_az_.st() * pattern.coeff(m, k0_ + kl) * basis_el_;
            if (n_calib_ == 1) {
                bnorm2_grid_ += static_cast<double>(freqs_.count) * arma::square(arma::abs(s));
                break;
            }
            arma::mat sq = arma::square(arma::abs(s));
            if (kl > 0)
                bnorm2_grid_ += w1_[kl - 1] * sq_prev + w2_[kl - 1] * sq +
                                wx_[kl - 1] * arma::real(s_prev % arma::conj(s));
            sq_prev = std::move(sq);
            s_prev = std::move(s);
        }
    }
}

SageEstimator::DelayTable SageEstimator::make_delay_table(double grid_offset_fraction) const {
    DelayTable t;
    const std::size_t n = cfg_.delay_search.coarse_grid_points;
    t.grid.resize(n);
    // same node expression as the brute-force reference so grid cells match
    for (std::size_t i = 0; i < n; ++i)
        t.grid[i] =
            std::min(cfg_.delay_search.max_delay_s *
                         (static_cast<double>(i) + grid_offset_fraction) /
                         static_cast<double>(n - 1),
                     cfg_.delay_search.max_delay_s);
    t.phasor.set_size(freqs_.count, n);
    for (std::size_t d = 0; d < n; ++d)
        for (std::size_t fi = 0; fi < freqs_.count; ++fi)
            t.phasor(fi, d) = std::polar(1.0, 2.0 * pi * freqs_.freq_hz(fi) * t.grid[d]);
    return t;
}

arma::cx_mat SageEstimator::eval_ports_local(double phi, double theta) const {
    return eadf_eval_ports(*pattern_, phi, theta, k0_, k1_);
}

double SageEstimator::bnorm2_from_ports(const arma::cx_mat& A) const {
    if (n_calib_ == 1)
        return static_cast<double>(freqs_.count) *
               arma::accu(arma::square(arma::abs(A.col(0))));
    double acc = 0.0;
    for (std::size_t kl = 0; kl + 1 < n_calib_; ++kl) {
        const double sq_a = arma::accu(arma::square(arma::abs(A.col(kl))));
        const double sq_b = arma::accu(arma::square(arma::abs(A.col(kl + 1))));
        const double cr = arma::accu(arma::real(A.col(kl) % arma::conj(A.col(kl + 1))));
        acc += w1_[kl] * sq_a + w2_[kl] * sq_b + wx_[kl] * cr;
    }
    return acc;
}

cx SageEstimator::inner_product(const arma::cx_mat& A, const arma::cx_mat& z) const {
    return arma::accu(arma::conj(A) % z);
}

arma::cx_mat SageEstimator::aggregate_to_calib(const arma::cx_mat& y) const {
    arma::cx_mat z(num_ports_, n_calib_, arma::fill::zeros);
    for (std::size_t fi = 0; fi < freqs_.count; ++fi) {
        const std::size_t kl = br_[fi];
        const double w = w_[fi];
        z.col(kl) += (1.0 - w) * y.col(fi);
        if (w != 0.0 && kl + 1 < n_calib_)
            z.col(kl + 1) += w * y.col(fi);
    }
    return z;
}

arma::cx_vec SageEstimator::delay_correlation_input(const arma::cx_mat& A,
                                                    const arma::cx_mat& x) const {
    arma::cx_vec g(freqs_.count);
    arma::cx_vec a(num_ports_);
    for (std::size_t fi = 0; fi < freqs_.count; ++fi) {
        const std::size_t kl = br_[fi];
        if (n_calib_ == 1)
            a = A.col(0);
        else
            a = (1.0 - w_[fi]) * A.col(kl) + w_[fi] * A.col(kl + 1);
        g[fi] = arma::cdot(a, x.col(fi));
    }
    return g;
}

cx SageEstimator::delay_correlation(const arma::cx_vec& g, double tau) const {
    cx acc(0.0, 0.0);
    for (std::size_t fi = 0; fi < freqs_.count; ++fi)
        acc += g[fi] * std::polar(1.0, 2.0 * pi * freqs_.freq_hz(fi) * tau);
    return acc;
}

// Delay coordinate update: correlation maximization over the grid plus the
// current value, then dichotomous refinement. The angle stays fixed, so the
// denominator is constant and only |correlation|^2 is compared.
void SageEstimator::update_delay(PathState& path, const arma::cx_mat& x,
                                 const DelayTable& table) const {
    const arma::cx_mat A = eval_ports_local(path.params.phi_rad, path.params.theta_rad);
    const arma::cx_vec g = delay_correlation_input(A, x);

    // coarse scan; ascending order makes ties resolve to the lowest delay
    const arma::vec scores = arma::square(arma::abs(table.phasor.st() * g));
    std::size_t best_d = 0;
    double best_score = scores[0];
    for (std::size_t d = 1; d < scores.n_elem; ++d)
        if (scores[d] > best_score) {
            best_score = scores[d];
            best_d = d;
        }

    double center = table.grid[best_d];
    double center_score = std::norm(delay_correlation(g, center));
    const double cur_score = std::norm(delay_correlation(g, path.params.tau_s));
    if (cur_score >= center_score) {
        center = path.params.tau_s;
        center_score = cur_score;
    }

    double half = 0.5 * cfg_.delay_search.max_delay_s /
                  static_cast<double>(cfg_.delay_search.coarse_grid_points - 1);
    for (std::size_t level = 0; level < cfg_.delay_search.refinement_levels; ++level) {
        for (const double cand : {center - half, center + half}) {
            if (cand < 0.0 || cand > cfg_.delay_search.max_delay_s)
                continue;
            const double sc = std::norm(delay_correlation(g, cand));
            if (sc > center_score) {
                center_score = sc;
                center = cand;
            }
        }
        half *= 0.5;
    }

    if (center_score > cur_score)
        path.params.tau_s = center;
}

// Joint azimuth/elevation update: spectral-domain scan over the whole angle
// grid, then 3x3 dichotomous refinement with exact objective values.
void SageEstimator::update_angles(PathState& path, const arma::cx_mat& x) const {
    // y = x advanced by the current delay; z = y binned onto calibration
    // frequencies so inner products reduce to sums over (port, calib index)
    arma::cx_mat y = x;
    for (std::size_t fi = 0; fi < freqs_.count; ++fi)
        y.col(fi) *= std::polar(1.0, 2.0 * pi * freqs_.freq_hz(fi) * path.params.tau_s);
    const arma::cx_mat z = aggregate_to_calib(y);

    // G collapses ports and calibration bins; the correlation at any angle
    // is then a single harmonic synthesis: <b,x> = conj(sum G .* basis)
    arma::cx_mat G(pattern_->n_az, pattern_->n_el2, arma::fill::zeros);
    for (std::size_t m = 0; m < num_ports_; ++m)
        for (std::size_t kl = 0; kl < n_calib_; ++kl)
            G += std::conj(z(m, kl)) * pattern_->coeff(m, k0_ + kl);

    const arma::mat num_grid = arma::square(arma::abs(basis_az_.st() * G * basis_el_));

    std::size_t best_i = 0, best_j = 0;
    double best_val = -1.0;
    for (std::size_t i = 0; i < az_grid_.size(); ++i)
        for (std::size_t j = 0; j < el_grid_.size(); ++j) {
            const double den = bnorm2_grid_(i, j);
            if (den <= 0.0)
                continue;
            const double v = num_grid(i, j) / den;
            if (v > best_val) {
                best_val = v;
                best_i = i;
                best_j = j;
            }
        }

    // exact objective via direct port-domain evaluation, used for every
    // accept decision from here on
    const auto exact_obj = [&](double phi, double theta) {
        const arma::cx_mat A = eval_ports_local(phi, theta);
        const double den = bnorm2_from_ports(A);
        if (den <= 0.0)
            return -std::numeric_limits<double>::infinity();
        return std::norm(inner_product(A, z)) / den;
    };

    const double cur_obj = exact_obj(path.params.phi_rad, path.params.theta_rad);
    double center_phi = az_grid_[best_i];
    double center_theta = el_grid_[best_j];
    double center_obj = exact_obj(center_phi, center_theta);
    if (cur_obj >= center_obj) {
        center_phi = path.params.phi_rad;
        center_theta = path.params.theta_rad;
        center_obj = cur_obj;
    }

    double half_az = 0.5 * deg2rad(cfg_.angle_search.azimuth_step_deg);
    double half_el = 0.5 * deg2rad(cfg_.angle_search.elevation_step_deg);
    for (std::size_t level = 0; level < cfg_.angle_search.refinement_levels; ++level) {
        const double base_phi = center_phi;
        const double base_theta = center_theta;
        for (const double dphi : {-half_az, 0.0, half_az})
            for (const double dtheta : {-half_el, 0.0, half_el}) {
                if (dphi == 0.0 && dtheta == 0.0)
                    continue;
                const double theta = base_theta + dtheta;
                if (theta < 0.0 || theta > pi)
                    continue;
                const double phi = normalize_azimuth(base_phi + dphi);
                const double v = exact_obj(phi, theta);
                if (v > center_obj) {
                    center_obj = v;
                    center_phi = phi;
                    center_theta = theta;
                }
            }
        half_az *= 0.5;
        half_el *= 0.5;
    }

    if (center_obj > cur_obj) {
        path.params.phi_rad = center_phi;
        path.params.theta_rad = center_theta;
    }
}

// Closed-form least-squares amplitude and the resulting contribution.
void SageEstimator::update_amplitude(PathState& path, const arma::cx_mat& x) const {
    const arma::cx_mat A = eval_ports_local(path.params.phi_rad, path.params.theta_rad);
    arma::cx_mat b(num_ports_, freqs_.count);
    for (std::size_t fi = 0; fi < freqs_.count; ++fi) {
        const std::size_t kl = br_[fi];
        arma::cx_vec a = (n_calib_ == 1)
                             ? arma::cx_vec(A.col(0))
                             : arma::cx_vec((1.0 - w_[fi]) * A.col(kl) + w_[fi] * A.col(kl + 1));
        b.col(fi) = a * std::polar(1.0, -2.0 * pi * freqs_.freq_hz(fi) * path.params.tau_s);
    }
    const cx inner = arma::accu(arma::conj(b) % x);
    const double bb = arma::accu(arma::square(arma::abs(b)));
    path.params.alpha = bb > 0.0 ? inner / bb : cx(0.0, 0.0);
    path.contribution = path.params.alpha * b;
}

SageEstimator::PathState SageEstimator::fit_new_path(const arma::cx_mat& residual,
                                                     const DelayTable& table) const {
    PathState path;
    path.params = PathParams{};

    // port-noncoherent delay scan: no angle estimate exists yet
    const arma::mat per_port = arma::square(arma::abs(residual * table.phasor));
    const arma::rowvec scores = arma::sum(per_port, 0);
    std::size_t best_d = 0;
    double best_score = scores[0];
    for (std::size_t d = 1; d < scores.n_elem; ++d)
        if (scores[d] > best_score) {
            best_score = scores[d];
            best_d = d;
        }
    path.params.tau_s = table.grid[best_d];

    update_angles(path, residual);
    update_delay(path, residual, table);
    update_amplitude(path, residual);
    return path;
}

EstimationReport SageEstimator::run_once(const arma::cx_mat& x, const DelayTable& table) const {
    const double input_power = arma::accu(arma::square(arma::abs(x)));
    EstimationReport report;

    std::vector<PathState> paths;
    arma::cx_mat residual = x;

    // successive interference cancellation
    for (std::size_t l = 0; l < cfg_.num_paths; ++l) {
        PathState p = fit_new_path(residual, table);
        residual -= p.contribution;
        paths.push_back(std::move(p));
        if (cfg_.residual_stop_fraction &&
            arma::accu(arma::square(arma::abs(residual))) <=
                *cfg_.residual_stop_fraction * input_power)
            break;
    }
    report.residual_power_per_cycle.push_back(arma::accu(arma::square(arma::abs(residual))));

    // SAGE cycles: re-estimate each path against the signal with all other
    // paths' contributions removed
    double prev_res = report.residual_power_per_cycle.back();
    for (std::size_t cycle = 0; cycle < cfg_.max_cycles; ++cycle) {
        for (auto& p : paths) {
            const arma::cx_mat x_l = residual + p.contribution;
            update_delay(p, x_l, table);
            update_angles(p, x_l);
            update_amplitude(p, x_l);
            residual = x_l - p.contribution;
        }
        const double res = arma::accu(arma::square(arma::abs(residual)));
        report.residual_power_per_cycle.push_back(res);
        report.cycles_used = cycle + 1;
        if (prev_res - res <= cfg_.convergence_tol * input_power) {
            report.converged = true;
            break;
        }
        prev_res = res;
    }

    for (const auto& p : paths)
        report.paths.paths.push_back(p.params);
    report.paths.sort_canonical();
    return report;
}

EstimationReport SageEstimator::estimate(const ChannelMatrix& h_train) const {
    h_train.check_consistent();
    if (h_train.num_ports != num_ports_)
        throw validation_error("SageEstimator: port count does not match pattern");
    if (!h_train.freqs.same_as(freqs_))
        throw validation_error("SageEstimator: channel grid does not match training grid");
    if (cfg_.num_paths * 3 >= num_ports_ * freqs_.count)
        throw validation_error("SageEstimator: too many paths for the observation size");

    const double input_power = arma::accu(arma::square(arma::abs(h_train.values)));
    if (input_power == 0.0) {
        EstimationReport report;
        report.paths.paths.assign(cfg_.num_paths, PathParams{});
        report.residual_power_per_cycle = {0.0};
        report.converged = true;
        report.cycles_used = 0;
        return report;
    }

    EstimationReport best = run_once(h_train.values, delay_);
    for (std::size_t run = 1; run < cfg_.multi_start; ++run) {
        Rng rng(derive_seed(cfg_.seed, 0x5a6e + run));
        const DelayTable jittered = make_delay_table(rng.uniform());
        EstimationReport r = run_once(h_train.values, jittered);
        if (r.residual_power_per_cycle.back() < best.residual_power_per_cycle.back())
            best = std::move(r);
    }
    return best;
}

EstimationReport estimate(const ChannelMatrix& h_train, const EadfPattern& pattern,
                          const EstimatorConfig& cfg) {
    SageEstimator est(pattern, h_train.freqs, cfg);
    return est.estimate(h_train);
}

PathParams single_path_ml_oracle(const ChannelMatrix& h_train, const EadfPattern& pattern,
                                 const DelaySearchSpec& delay_grid,
                                 const AngleSearchSpec& angle_grid) {
    h_train.check_consistent();
    if (h_train.num_ports != pattern.num_ports)
        throw validation_error("single_path_ml_oracle: port count mismatch");

    if (delay_grid.coarse_grid_points < 2)
        throw validation_error("single_path_ml_oracle: need at least 2 delay nodes");
    const std::size_t n_delay = delay_grid.coarse_grid_points;
    std::vector<double> taus(n_delay);
    for (std::size_t d = 0; d < n_delay; ++d)
        taus[d] = delay_grid.max_delay_s * static_cast<double>(d) /
                  static_cast<double>(n_delay - 1);
    const std::vector<double> az = make_angle_axis(angle_grid.azimuth_step_deg, 360.0, false);
    const std::vector<double> el = make_angle_axis(angle_grid.elevation_step_deg, 180.0, true);

    if (n_delay * az.size() * el.size() > 1000000)
        throw validation_error("single_path_ml_oracle: candidate budget exceeded (10^6)");

    const FrequencyGrid& freqs = h_train.freqs;
    std::size_t k0 = 0, k1 = 0;
    if (pattern.freqs.count > 1) {
        k0 = bracket(pattern.freqs, freqs.start_hz).first;
        k1 = bracket(pattern.freqs, freqs.last_hz()).first + 1;
    }

    double best_obj = -1.0;
    std::size_t best_tuple[3] = {0, 0, 0}; // (delay, azimuth, elevation) indices
    cx best_corr(0.0, 0.0);
    double best_den = 1.0;

    arma::cx_vec a(h_train.num_ports);
    for (std::size_t ia = 0; ia < az.size(); ++ia) {
        for (std::size_t ie = 0; ie < el.size(); ++ie) {
            const arma::cx_mat A = eadf_eval_ports(pattern, az[ia], el[ie], k0, k1);
            arma::cx_vec g(freqs.count);
            double den = 0.0;
            for (std::size_t fi = 0; fi < freqs.count; ++fi) {
                if (pattern.freqs.count == 1) {
                    a = A.col(0);
                } else {
                    const auto [k, w] = bracket(pattern.freqs, freqs.freq_hz(fi));
                    a = (1.0 - w) * A.col(k - k0) + w * A.col(k - k0 + 1);
                }
                den += arma::accu(arma::square(arma::abs(a)));
                g[fi] = arma::cdot(a, h_train.values.col(fi));
            }
            if (den <= 0.0)
                continue;
            for (std::size_t d = 0; d < n_delay; ++d) {
                cx corr(0.0, 0.0);
                for (std::size_t fi = 0; fi < freqs.count; ++fi)
                    corr += g[fi] * std::polar(1.0, 2.0 * pi * freqs.freq_hz(fi) * taus[d]);
                const double obj = std::norm(corr) / den;
                const bool better =
                    obj > best_obj ||
                    (obj == best_obj &&
                     (d < best_tuple[0] ||
                      (d == best_tuple[0] &&
                       (ia < best_tuple[1] || (ia == best_tuple[1] && ie < best_tuple[2])))));
                if (better) {
                    best_obj = obj;
                    best_tuple[0] = d;
                    best_tuple[1] = ia;
                    best_tuple[2] = ie;
                    best_corr = corr;
                    best_den = den;
                }
            }
        }
    }

    PathParams p;
    p.tau_s = taus[best_tuple[0]];
    p.phi_rad = az[best_tuple[1]];
    p.theta_rad = el[best_tuple[2]];
    p.alpha = best_obj > 0.0 ? best_corr / best_den : cx(0.0, 0.0);
    return p;
}

} // namespace chanex
