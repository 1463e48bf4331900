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

#include "chanex/io.hpp"

#include <bit>
#include <fstream>
#include <json.hpp>
#include <vector>

static_assert(std::endian::native == std::endian::little,
              "binary channel/pattern files are little-endian");

namespace chanex {

using nlohmann::json;

namespace {

json parse_json(const std::string& text, const std::string& what) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded())
        throw io_error("malformed JSON in " + what);
    return j;
}

void write_binary(const std::string& path, const std::vector<double>& data) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f)
        throw io_error("cannot open for writing: " + path);
    f.write(reinterpret_cast<const char*>(data.data()),
            static_cast<std::streamsize>(data.size() * sizeof(double)));
    if (!f)
        throw io_error("write failed: " + path);
}

std::vector<double> read_binary(const std::string& path, std::size_t expected_doubles) {
    std::ifstream f(path, std::ios::binary | std::ios::ate);
    if (!f)
        throw io_error("cannot open: " + path);
    const auto bytes = static_cast<std::size_t>(f.tellg());
    if (bytes != expected_doubles * sizeof(double))
        throw io_error("unexpected size of " + path);
    std::vector<double> data(expected_doubles);
    f.seekg(0);
    f.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(bytes));
    if (!f)
        throw io_error("read failed: " + path);
    return data;
}

FrequencyGrid grid_from_header(const json& j, const std::string& what) {
    try {
        return FrequencyGrid(j.at("freq_start_hz").get<double>(),
                             j.at("freq_step_hz").get<double>(),
                             j.at("freq_count").get<std::size_t>());
    } catch (const json::exception&) {
        throw io_error("bad frequency grid in " + what);
    }
}

void require_magic(const json& j, const std::string& magic, const std::string& path) {
    if (!j.contains("magic") || j["magic"] != magic)
        throw io_error("not a " + magic + " file: " + path);
}

} // namespace

std::string read_text_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw io_error("cannot open: " + path);
    std::string s((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    return s;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f)
        throw io_error("cannot open for writing: " + path);
    f << content;
    if (!f)
        throw io_error("write failed: " + path);
}

void write_patx1(const std::string& path, const ArrayPattern& p) {
    p.check_consistent();
    json j;
    j["magic"] = "PATX1";
    j["ports"] = p.num_ports;
    j["azimuth_deg"] = p.angles.azimuth_deg();
    j["elevation_deg"] = p.angles.elevation_deg();
    j["freq_start_hz"] = p.freqs.start_hz;
    j["freq_step_hz"] = p.freqs.step_hz;
    j["freq_count"] = p.freqs.count;
    write_text_file(path, j.dump(2) + "\n");

    std::vector<double> data;
    data.reserve(2 * p.num_ports * p.angles.n_az() * p.angles.n_el() * p.freqs.count);
    for (std::size_t m = 0; m < p.num_ports; ++m)
        for (std::size_t i = 0; i < p.angles.n_az(); ++i)
            for (std::size_t jj = 0; jj < p.angles.n_el(); ++jj)
                for (std::size_t k = 0; k < p.freqs.count; ++k) {
                    const cx v = p.gains[m](i, jj, k);
                    data.push_back(v.real());
                    data.push_back(v.imag());
                }
    write_binary(path + ".bin", data);
}

ArrayPattern read_patx1(const std::string& path) {
    const json j = parse_json(read_text_file(path), path);
    require_magic(j, "PATX1", path);
    std::size_t ports = 0;
    std::vector<double> az, el;
    try {
        ports = j.at("ports").get<std::size_t>();
        az = j.at("azimuth_deg").get<std::vector<double>>();
        el = j.at("elevation_deg").get<std::vector<double>>();
    } catch (const json::exception&) {
        throw io_error("bad PATX1 header: " + path);
    }
    ArrayPattern p(ports, AngleGrid(az, el), grid_from_header(j, path));

    const std::size_t n = ports * p.angles.n_az() * p.angles.n_el() * p.freqs.count;
    const std::vector<double> data = read_binary(path + ".bin", 2 * n);
    std::size_t idx = 0;
    for (std::size_t m = 0; m < ports; ++m)
        for (std::size_t i = 0; i < p.angles.n_az(); ++i)
            for (std::size_t jj = 0; jj < p.angles.n_el(); ++jj)
                for (std::size_t k = 0; k < p.freqs.count; ++k) {
                    p.gains[m](i, jj, k) = cx(data[idx], data[idx + 1]);
                    idx += 2;
                }
    p.check_consistent();
    return p;
}

namespace {

void write_chx1_impl(const std::string& path, std::size_t ports, const FrequencyGrid& freqs,
                     const std::string& role, const arma::cx_mat& values) {
    json j;
    j["magic"] = "CHX1";
    j["ports"] = ports;
    j["freq_start_hz"] = freqs.start_hz;
    j["freq_step_hz"] = freqs.step_hz;
    j["freq_count"] = freqs.count;
    j["role"] = role;
    write_text_file(path, j.dump(2) + "\n");

    std::vector<double> data;
    data.reserve(2 * ports * freqs.count);
    for (std::size_t m = 0; m < ports; ++m)
        for (std::size_t fi = 0; fi < freqs.count; ++fi) {
            data.push_back(values(m, fi).real());
            data.push_back(values(m, fi).imag());
        }
    write_binary(path + ".bin", data);
}

struct Chx1Raw {
    std::size_t ports;
    FrequencyGrid freqs;
    std::string role;
    arma::cx_mat values;
};

Chx1Raw read_chx1_impl(const std::string& path) {
    const json j = parse_json(read_text_file(path), path);
    require_magic(j, "CHX1", path);
    Chx1Raw r;
    try {
        r.ports = j.at("ports").get<std::size_t>();
        r.role = j.at("role").get<std::string>();
    } catch (const json::exception&) {
        throw io_error("bad CHX1 header: " + path);
    }
    r.freqs = grid_from_header(j, path);
    if (r.ports < 1)
        throw io_error("CHX1 with zero ports: " + path);

    const std::vector<double> data = read_binary(path + ".bin", 2 * r.ports * r.freqs.count);
    r.values.set_size(r.ports, r.freqs.count);
    std::size_t idx = 0;
    for (std::size_t m = 0; m < r.ports; ++m)
        for (std::size_t fi = 0; fi < r.freqs.count; ++fi) {
            r.values(m, fi) = cx(data[idx], data[idx + 1]);
            idx += 2;
        }
    return r;
}

} // namespace

void write_chx1(const std::string& path, const ChannelMatrix& h) {
    h.check_consistent();
    write_chx1_impl(path, h.num_ports, h.freqs, role_name(h.role), h.values);
}

ChannelMatrix read_chx1(const std::string& path) {
    Chx1Raw r = read_chx1_impl(path);
    ChannelMatrix h(r.ports, r.freqs, role_from_name(r.role));
    h.values = std::move(r.values);
    h.check_consistent();
    return h;
}

void write_b2b_chx1(const std::string& path, const B2bResponse& b) {
    b.check_consistent();
    write_chx1_impl(path, 1, b.freqs, "b2b", arma::cx_mat(b.values).st());
}

B2bResponse read_b2b_chx1(const std::string& path) {
    Chx1Raw r = read_chx1_impl(path);
    if (r.role != "b2b")
        throw io_error("expected role b2b in " + path);
    if (r.ports != 1)
        throw io_error("back-to-back response must have exactly 1 port: " + path);
    B2bResponse b;
    b.freqs = r.freqs;
    b.values = r.values.st();
    b.check_consistent();
    return b;
}

std::string paths_to_json(const PathSet& ps) {
    json arr = json::array();
    for (const auto& p : ps.paths) {
        json e;
        e["alpha_re"] = p.alpha.real();
        e["alpha_im"] = p.alpha.imag();
        e["tau_s"] = p.tau_s;
        e["phi_deg"] = rad2deg(p.phi_rad);
        e["theta_deg"] = rad2deg(p.theta_rad);
        arr.push_back(e);
    }
    return arr.dump(2) + "\n";
}

PathSet paths_from_json(const std::string& text) {
    const json arr = parse_json(text, "path set");
    if (!arr.is_array())
        throw io_error("path set must be a JSON array");
    PathSet ps;
    for (const auto& e : arr) {
        try {
            PathParams p;
            p.alpha = cx(e.at("alpha_re").get<double>(), e.at("alpha_im").get<double>());
            p.tau_s = e.at("tau_s").get<double>();
            p.phi_rad = deg2rad(e.at("phi_deg").get<double>());
            p.theta_rad = deg2rad(e.at("theta_deg").get<double>());
            ps.paths.push_back(p);
        } catch (const json::exception&) {
            throw io_error("bad path entry in path set");
        }
    }
    ps.validate();
    return ps;
}

void write_paths_json(const std::string& path, const PathSet& ps) {
    write_text_file(path, paths_to_json(ps));
}

PathSet read_paths_json(const std::string& path) {
    return paths_from_json(read_text_file(path));
}

namespace {

template <typename T>
void get_if_present(const json& j, const char* key, T& target) {
    if (j.contains(key) && !j[key].is_null())
        target = j[key].get<T>();
}

void reject_unknown_keys(const json& j, std::initializer_list<const char*> known,
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

} // namespace

EstimatorConfig estimator_config_from_json(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded())
        throw validation_error("malformed estimator config JSON");
    EstimatorConfig cfg;
    reject_unknown_keys(j,
                        {"num_paths", "delay_search", "angle_search", "max_cycles",
                         "convergence_tol", "seed", "multi_start", "residual_stop_fraction"},
                        "estimator config");
    get_if_present(j, "num_paths", cfg.num_paths);
    if (j.contains("delay_search")) {
        const json& d = j["delay_search"];
        reject_unknown_keys(d, {"max_delay_s", "coarse_grid_points", "refinement_levels"},
                            "estimator config delay_search");
        get_if_present(d, "max_delay_s", cfg.delay_search.max_delay_s);
        get_if_present(d, "coarse_grid_points", cfg.delay_search.coarse_grid_points);
        get_if_present(d, "refinement_levels", cfg.delay_search.refinement_levels);
    }
    if (j.contains("angle_search")) {
        const json& a = j["angle_search"];
        reject_unknown_keys(a, {"azimuth_step_deg", "elevation_step_deg", "refinement_levels"},
                            "estimator config angle_search");
        get_if_present(a, "azimuth_step_deg", cfg.angle_search.azimuth_step_deg);
        get_if_present(a, "elevation_step_deg", cfg.angle_search.elevation_step_deg);
        get_if_present(a, "refinement_levels", cfg.angle_search.refinement_levels);
    }
    get_if_present(j, "max_cycles", cfg.max_cycles);
    get_if_present(j, "convergence_tol", cfg.convergence_tol);
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned())
            throw validation_error("estimator config: seed must be a non-negative integer");
        cfg.seed = j["seed"].get<std::uint64_t>();
    }
    get_if_present(j, "multi_start", cfg.multi_start);
    if (j.contains("residual_stop_fraction") && !j["residual_stop_fraction"].is_null())
        cfg.residual_stop_fraction = j["residual_stop_fraction"].get<double>();
    cfg.validate();
    return cfg;
}

std::string estimator_config_to_json(const EstimatorConfig& cfg) {
    json j;
    j["num_paths"] = cfg.num_paths;
    j["delay_search"] = {{"max_delay_s", cfg.delay_search.max_delay_s},
                         {"coarse_grid_points", cfg.delay_search.coarse_grid_points},
                         {"refinement_levels", cfg.delay_search.refinement_levels}};
    j["angle_search"] = {{"azimuth_step_deg", cfg.angle_search.azimuth_step_deg},
                         {"elevation_step_deg", cfg.angle_search.elevation_step_deg},
                         {"refinement_levels", cfg.angle_search.refinement_levels}};
    j["max_cycles"] = cfg.max_cycles;
    j["convergence_tol"] = cfg.convergence_tol;
    j["seed"] = cfg.seed;
    j["multi_start"] = cfg.multi_start;
    if (cfg.residual_stop_fraction)
        j["residual_stop_fraction"] = *cfg.residual_stop_fraction;
    else
        j["residual_stop_fraction"] = nullptr;
    return j.dump(2) + "\n";
}

std::string report_to_json(const EstimationReport& report) {
    json j;
    j["paths"] = json::parse(paths_to_json(report.paths));
    j["residual_power_per_cycle"] = report.residual_power_per_cycle;
    j["converged"] = report.converged;
    j["cycles_used"] = report.cycles_used;
    return j.dump(2) + "\n";
}

} // namespace chanex
