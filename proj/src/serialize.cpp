// SPDX-License-Identifier: Apache-2.0
//
// nomafd - WMMSE power allocation for multicarrier NOMA full-duplex cells
// Copyright (C) 2026 The nomafd authors
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

#include "nomafd/serialize.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace nomafd {

using nlohmann::json;

namespace {

json complex_to_json(const Complex& v) { return json::array({v.real(), v.imag()}); }

Complex complex_from_json(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

double sinr_to_db(double gamma) {
    // Zero SINR floors at -999 dB so CSV rows stay numeric.
    return gamma > 0.0 ? linear_to_db(gamma) : -999.0;
}

void reject_unknown_keys(const json& j, const std::vector<std::string>& known,
                         const std::string& section) {
    if (!j.is_object()) throw std::invalid_argument("config section '" + section + "' must be an object");
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (std::find(known.begin(), known.end(), key) == known.end())
            throw std::invalid_argument("unknown key '" + key + "' in config section '" + section +
                                        "'");
    }
}

template <typename T>
void read_field(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc()) return "nan";
    return std::string(buf, ptr);
}

json to_json(const Scenario& s) {
    json positions = json::array();
    for (const auto& [id, pos] : s.user_positions)
        positions.push_back({{"id", id}, {"x", pos.x}, {"y", pos.y}});
    return json{{"schema_version", kSchemaVersion},
                {"cell_radius_m", s.cell_radius_m},
                {"min_distance_m", s.min_distance_m},
                {"num_subcarriers", s.num_subcarriers},
                {"uplink_users", s.users.uplink},
                {"downlink_users", s.users.downlink},
                {"user_positions", positions},
                {"path_loss_exponent", s.path_loss_exponent},
                {"shadowing_sigma_db", s.shadowing_sigma_db},
                {"si_cancellation_db", s.si_cancellation_db},
                {"noise_power_dbm", s.noise_power_dbm},
                {"p_u_dbm", s.p_u_dbm},
                {"p_d_dbm", s.p_d_dbm},
                {"rng_seed", s.rng_seed}};
}

Scenario scenario_from_json(const json& j) {
    Scenario s;
    s.cell_radius_m = j.at("cell_radius_m").get<double>();
    s.min_distance_m = j.at("min_distance_m").get<double>();
    s.num_subcarriers = j.at("num_subcarriers").get<int>();
    s.users.uplink = j.at("uplink_users").get<std::vector<UserId>>();
    s.users.downlink = j.at("downlink_users").get<std::vector<UserId>>();
    for (const auto& p : j.at("user_positions"))
        s.user_positions[p.at("id").get<UserId>()] = {p.at("x").get<double>(),
                                                      p.at("y").get<double>()};
    s.path_loss_exponent = j.at("path_loss_exponent").get<double>();
    s.shadowing_sigma_db = j.at("shadowing_sigma_db").get<double>();
    s.si_cancellation_db = j.at("si_cancellation_db").get<double>();
    s.noise_power_dbm = j.at("noise_power_dbm").get<double>();
    s.p_u_dbm = j.at("p_u_dbm").get<double>();
    s.p_d_dbm = j.at("p_d_dbm").get<double>();
    s.rng_seed = j.at("rng_seed").get<std::uint64_t>();
    s.validate();
    return s;
}

json to_json(const ChannelSet& H) {
    json gains = json::array();
    for (const auto& [key, row] : H.gains) {
        json h = json::array();
        for (const Complex& v : row) h.push_back(complex_to_json(v));
        gains.push_back({{"tx", key.first}, {"rx", key.second}, {"h", h}});
    }
    return json{{"schema_version", kSchemaVersion},
                {"uplink_users", H.users.uplink},
                {"downlink_users", H.users.downlink},
                {"num_subcarriers", H.num_subcarriers},
                {"noise_power_w", H.noise_power_w},
                {"gains", gains}};
}

ChannelSet channel_set_from_json(const json& j) {
    ChannelSet H;
    H.users.uplink = j.at("uplink_users").get<std::vector<UserId>>();
    H.users.downlink = j.at("downlink_users").get<std::vector<UserId>>();
    H.num_subcarriers = j.at("num_subcarriers").get<int>();
    H.noise_power_w = j.at("noise_power_w").get<double>();
    for (const auto& entry : j.at("gains")) {
        std::vector<Complex> row;
        for (const auto& v : entry.at("h")) row.push_back(complex_from_json(v));
        if (row.size() != static_cast<std::size_t>(H.num_subcarriers))
            throw std::invalid_argument("gain row length does not match num_subcarriers");
        H.gains[{entry.at("tx").get<UserId>(), entry.at("rx").get<UserId>()}] = std::move(row);
    }
    return H;
}

namespace {

json powers_to_json(const PowerVector& P) {
    json out = json::array();
    for (const auto& [id, row] : P.p) out.push_back({{"id", id}, {"p_w", row}});
    return out;
}

json rates_to_json(const std::map<UserId, double>& rates_nats) {
    json out = json::array();
    for (const auto& [id, r] : rates_nats) out.push_back({{"id", id}, {"rate", nats_to_bits(r)}});
    return out;
}

}  // namespace

json to_json(const RunResult& r) {
    json trace = json::array();
    for (double v : r.objective_trace) trace.push_back(nats_to_bits(v));
    json mu_u = json::array();
    for (const auto& [id, mu] : r.final_state.mu_u) mu_u.push_back({{"id", id}, {"mu", mu}});
    json mu_sic = json::array();
    for (const auto& [key, mu] : r.final_state.mu_sic)
        mu_sic.push_back({{"id", key.first}, {"subcarrier", key.second}, {"mu", mu}});
    json residuals = json::array();
    for (const auto& [key, gamma] : r.sic_residuals)
        residuals.push_back({{"id", key.first}, {"subcarrier", key.second}, {"gamma", gamma}});
    return json{{"schema_version", kSchemaVersion},
                {"algorithm", "wmmse"},
                {"selector", to_string(r.selector_used)},
                {"sic_strategy", to_string(r.sic_strategy_used)},
                {"converged", r.converged},
                {"iterations_used", r.iterations_used},
                {"total_iterations", r.total_iterations},
                {"starts_used", r.starts_used},
                {"selected_start", r.selected_start},
                {"sic_rounds_used", r.sic_rounds_used},
                {"round_start_indices", r.round_start_indices},
                {"objective_trace_bpshz", trace},
                {"per_user_rates_bpshz", rates_to_json(r.per_user_rates)},
                {"powers_w", powers_to_json(r.final_state.P)},
                {"strong_users",
                 {{"uplink", r.final_state.strong.uplink},
                  {"downlink", r.final_state.strong.downlink}}},
                {"multipliers", {{"mu_d", r.final_state.mu_d}, {"mu_u", mu_u}, {"mu_sic", mu_sic}}},
                {"sic_residuals", residuals}};
}

json to_json(const BaselineResult& r) {
    json assignment = json::array();
    for (const auto& [key, id] : r.assignment)
        assignment.push_back(
            {{"direction", to_string(key.first)}, {"subcarrier", key.second}, {"id", id}});
    return json{{"schema_version", kSchemaVersion},
                {"algorithm", r.algorithm},
                {"weighted_sum_rate_bpshz", nats_to_bits(r.weighted_sum_rate)},
                {"per_user_rates_bpshz", rates_to_json(r.per_user_rates)},
                {"assignment", assignment},
                {"powers_w", powers_to_json(r.powers)},
                {"iterations_used", r.iterations_used},
                {"converged", r.converged}};
}

namespace {

json scenario_config_to_json(const ScenarioConfig& c) {
    return json{{"cell_radius_m", c.cell_radius_m},
                {"min_distance_m", c.min_distance_m},
                {"num_subcarriers", c.num_subcarriers},
                {"num_uplink_users", c.num_uplink_users},
                {"num_downlink_users", c.num_downlink_users},
                {"path_loss_exponent", c.path_loss_exponent},
                {"shadowing_sigma_db", c.shadowing_sigma_db},
                {"si_cancellation_db", c.si_cancellation_db},
                {"noise_power_dbm", c.noise_power_dbm},
                {"p_u_dbm", c.p_u_dbm},
                {"p_d_dbm", c.p_d_dbm}};
}

json solver_config_to_json(const SolverConfig& c) {
    return json{{"max_iterations", c.max_iterations},
                {"objective_rel_tol", c.objective_rel_tol},
                {"bisection_tol", c.bisection_tol},
                {"bisection_max_steps", c.bisection_max_steps},
                {"sic_strategy", to_string(c.sic_strategy)},
                {"sic_subgradient_step0", c.sic_subgradient_step0},
                {"sic_outer_rounds", c.sic_outer_rounds},
                {"epsilon_active", c.epsilon_active},
                {"selector", to_string(c.selector)},
                {"num_starts", c.num_starts}};
}

}  // namespace

json to_json(const SweepResult& r) {
    json cells = json::array();
    for (const auto& [key, cell] : r.cells) {
        cells.push_back({{"algorithm", to_string(key.first)},
                         {"sweep_value", key.second},
                         {"mean_bpshz", cell.mean},
                         {"stderr", cell.standard_error},
                         {"trials", cell.trials},
                         {"raw_bpshz", cell.raw},
                         {"mean_iterations", cell.mean_iterations},
                         {"converged_fraction", cell.converged_fraction}});
    }
    json trials = json::array();
    for (const TrialRecord& t : r.trials) {
        json results = json::object();
        for (const auto& [a, v] : t.ubar_bpshz) results[to_string(a)] = v;
        json rec = {{"sweep_value", t.value},
                    {"trial", t.trial},
                    {"seed", t.seed},
                    {"channel_digest", t.channel_digest},
                    {"ubar_bpshz", results}};
        if (t.failed) rec["error"] = t.error;
        trials.push_back(std::move(rec));
    }
    json algorithms = json::array();
    for (Algorithm a : r.spec.algorithms) algorithms.push_back(to_string(a));
    return json{{"schema_version", kSchemaVersion},
                {"spec",
                 {{"swept_parameter", to_string(r.spec.swept_parameter)},
                  {"values", r.spec.values},
                  {"trials_per_point", r.spec.trials_per_point},
                  {"seed0", r.spec.seed0},
                  {"algorithms", algorithms},
                  {"oracle_grid_points", r.spec.oracle_grid_points},
                  {"scenario", scenario_config_to_json(r.spec.base)},
                  {"solver", solver_config_to_json(r.spec.solver)}}},
                {"cells", cells},
                {"trials", trials}};
}

std::string sweep_to_csv(const SweepResult& r) {
    std::ostringstream out;
    out << "algorithm,sweep_value,mean_bpshz,stderr,trials\n";
    for (Algorithm a : r.spec.algorithms)
        for (double v : r.spec.values) {
            const SweepCell& cell = r.cells.at({a, v});
            out << to_string(a) << ',' << format_double(v) << ',' << format_double(cell.mean)
                << ',' << format_double(cell.standard_error) << ',' << cell.trials << '\n';
        }
    return out.str();
}

std::string trace_to_csv(const IterationTrace& t) {
    std::ostringstream out;
    out << "iteration,user_id,own_sinr_db,cross_sinr_db\n";
    for (const TracePoint& pt : t.points)
        out << pt.iteration << ',' << pt.weak_user << ',' << format_double(sinr_to_db(pt.own_sinr))
            << ',' << format_double(sinr_to_db(pt.cross_sinr)) << '\n';
    return out.str();
}

CliConfig parse_cli_config(const json& j) {
    reject_unknown_keys(j, {"scenario", "solver", "sweep"}, "top level");
    CliConfig cfg;

    if (j.contains("scenario")) {
        const json& s = j.at("scenario");
        reject_unknown_keys(s,
                            {"cell_radius_m", "min_distance_m", "num_subcarriers",
                             "num_uplink_users", "num_downlink_users", "path_loss_exponent",
                             "shadowing_sigma_db", "si_cancellation_db", "noise_power_dbm",
                             "p_u_dbm", "p_d_dbm"},
                            "scenario");
        read_field(s, "cell_radius_m", cfg.scenario.cell_radius_m);
        read_field(s, "min_distance_m", cfg.scenario.min_distance_m);
        read_field(s, "num_subcarriers", cfg.scenario.num_subcarriers);
        read_field(s, "num_uplink_users", cfg.scenario.num_uplink_users);
        read_field(s, "num_downlink_users", cfg.scenario.num_downlink_users);
        read_field(s, "path_loss_exponent", cfg.scenario.path_loss_exponent);
        read_field(s, "shadowing_sigma_db", cfg.scenario.shadowing_sigma_db);
        read_field(s, "si_cancellation_db", cfg.scenario.si_cancellation_db);
        read_field(s, "noise_power_dbm", cfg.scenario.noise_power_dbm);
        read_field(s, "p_u_dbm", cfg.scenario.p_u_dbm);
        read_field(s, "p_d_dbm", cfg.scenario.p_d_dbm);
        cfg.scenario.validate();
    }

    if (j.contains("solver")) {
        const json& s = j.at("solver");
        reject_unknown_keys(s,
                            {"max_iterations", "objective_rel_tol", "bisection_tol",
                             "bisection_max_steps", "sic_strategy", "sic_subgradient_step0",
                             "sic_outer_rounds", "epsilon_active", "selector", "num_starts"},
                            "solver");
        read_field(s, "max_iterations", cfg.solver.max_iterations);
        read_field(s, "objective_rel_tol", cfg.solver.objective_rel_tol);
        read_field(s, "bisection_tol", cfg.solver.bisection_tol);
        read_field(s, "bisection_max_steps", cfg.solver.bisection_max_steps);
        if (s.contains("sic_strategy"))
            cfg.solver.sic_strategy = sic_strategy_from_string(s.at("sic_strategy").get<std::string>());
        read_field(s, "sic_subgradient_step0", cfg.solver.sic_subgradient_step0);
        read_field(s, "sic_outer_rounds", cfg.solver.sic_outer_rounds);
        read_field(s, "epsilon_active", cfg.solver.epsilon_active);
        if (s.contains("selector"))
            cfg.solver.selector = strong_selector_from_string(s.at("selector").get<std::string>());
        read_field(s, "num_starts", cfg.solver.num_starts);
        cfg.solver.validate();
    }

    if (j.contains("sweep")) {
        const json& s = j.at("sweep");
        reject_unknown_keys(s,
                            {"swept_parameter", "values", "trials_per_point", "algorithms",
                             "seed0", "oracle_grid_points", "num_threads"},
                            "sweep");
        if (s.contains("swept_parameter"))
            cfg.sweep.swept_parameter =
                swept_parameter_from_string(s.at("swept_parameter").get<std::string>());
        if (s.contains("values")) cfg.sweep.values = s.at("values").get<std::vector<double>>();
        read_field(s, "trials_per_point", cfg.sweep.trials_per_point);
        if (s.contains("algorithms")) {
            cfg.sweep.algorithms.clear();
            for (const auto& name : s.at("algorithms"))
                cfg.sweep.algorithms.push_back(algorithm_from_string(name.get<std::string>()));
        }
        read_field(s, "seed0", cfg.sweep.seed0);
        read_field(s, "oracle_grid_points", cfg.sweep.oracle_grid_points);
        read_field(s, "num_threads", cfg.sweep.num_threads);
    }
    if (cfg.sweep.values.empty()) cfg.sweep.values = {10.0, 14.0, 20.0, 24.0};
    cfg.sweep.base = cfg.scenario;
    cfg.sweep.solver = cfg.solver;
    return cfg;
}

CliConfig load_cli_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("config parse error in '" + path + "': " + e.what());
    }
    return parse_cli_config(j);
}

}  // namespace nomafd
