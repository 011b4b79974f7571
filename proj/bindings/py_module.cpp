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

#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "nomafd/channel.hpp"
#include "nomafd/serialize.hpp"

namespace py = pybind11;
using namespace nomafd;

namespace {

template <typename T>
std::string dump_json(const T& value) {
    return to_json(value).dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "WMMSE power allocation for multicarrier NOMA full-duplex cells";

    py::enum_<Direction>(m, "Direction")
        .value("uplink", Direction::uplink)
        .value("downlink", Direction::downlink);

    py::enum_<SicStrategy>(m, "SicStrategy")
        .value("subgradient", SicStrategy::subgradient)
        .value("repair", SicStrategy::repair)
        .value("ignore", SicStrategy::ignore);

    py::enum_<StrongSelector>(m, "StrongSelector")
        .value("max_gain", StrongSelector::max_gain)
        .value("oma_wmmse", StrongSelector::oma_wmmse);

    py::enum_<SweptParameter>(m, "SweptParameter")
        .value("p_d_dbm", SweptParameter::p_d_dbm)
        .value("num_users", SweptParameter::num_users);

    py::enum_<Algorithm>(m, "Algorithm")
        .value("wmmse", Algorithm::wmmse)
        .value("oma_fd_greedy", Algorithm::oma_fd_greedy)
        .value("oma_hd_waterfill", Algorithm::oma_hd_waterfill)
        .value("grid_oracle", Algorithm::grid_oracle);

    py::class_<ScenarioConfig>(m, "ScenarioConfig")
        .def(py::init<>())
        .def_readwrite("cell_radius_m", &ScenarioConfig::cell_radius_m)
        .def_readwrite("min_distance_m", &ScenarioConfig::min_distance_m)
        .def_readwrite("num_subcarriers", &ScenarioConfig::num_subcarriers)
        .def_readwrite("num_uplink_users", &ScenarioConfig::num_uplink_users)
        .def_readwrite("num_downlink_users", &ScenarioConfig::num_downlink_users)
        .def_readwrite("path_loss_exponent", &ScenarioConfig::path_loss_exponent)
        .def_readwrite("shadowing_sigma_db", &ScenarioConfig::shadowing_sigma_db)
        .def_readwrite("si_cancellation_db", &ScenarioConfig::si_cancellation_db)
        .def_readwrite("noise_power_dbm", &ScenarioConfig::noise_power_dbm)
        .def_readwrite("p_u_dbm", &ScenarioConfig::p_u_dbm)
        .def_readwrite("p_d_dbm", &ScenarioConfig::p_d_dbm);

    py::class_<UserSets>(m, "UserSets")
        .def_readonly("uplink", &UserSets::uplink)
        .def_readonly("downlink", &UserSets::downlink);

    py::class_<Scenario>(m, "Scenario")
        .def_readonly("num_subcarriers", &Scenario::num_subcarriers)
        .def_readonly("users", &Scenario::users)
        .def_readonly("rng_seed", &Scenario::rng_seed)
        .def("distance_to_bs", &Scenario::distance_to_bs)
        .def("to_json_str", &dump_json<Scenario>);

    py::class_<ChannelSet>(m, "ChannelSet")
        .def_readonly("num_subcarriers", &ChannelSet::num_subcarriers)
        .def_readonly("noise_power_w", &ChannelSet::noise_power_w)
        .def_readonly("users", &ChannelSet::users)
        .def("gain", &ChannelSet::gain)
        .def("gain2", &ChannelSet::gain2)
        .def("digest", &channel_digest)
        .def("to_json_str", &dump_json<ChannelSet>);

    py::class_<FairnessWeights>(m, "FairnessWeights")
        .def_readonly("alpha", &FairnessWeights::alpha);

    py::class_<Budgets>(m, "Budgets")
        .def(py::init([](double p_u_w, double p_d_w) {
                 return Budgets{p_u_w, p_d_w};
             }),
             py::arg("p_u_w"), py::arg("p_d_w"))
        .def_readwrite("p_u_w", &Budgets::p_u_w)
        .def_readwrite("p_d_w", &Budgets::p_d_w)
        .def_static("from_scenario", &Budgets::from_scenario);

    py::class_<SolverConfig>(m, "SolverConfig")
        .def(py::init<>())
        .def_readwrite("max_iterations", &SolverConfig::max_iterations)
        .def_readwrite("objective_rel_tol", &SolverConfig::objective_rel_tol)
        .def_readwrite("bisection_tol", &SolverConfig::bisection_tol)
        .def_readwrite("bisection_max_steps", &SolverConfig::bisection_max_steps)
        .def_readwrite("sic_strategy", &SolverConfig::sic_strategy)
        .def_readwrite("sic_subgradient_step0", &SolverConfig::sic_subgradient_step0)
        .def_readwrite("sic_outer_rounds", &SolverConfig::sic_outer_rounds)
        .def_readwrite("epsilon_active", &SolverConfig::epsilon_active)
        .def_readwrite("selector", &SolverConfig::selector)
        .def_readwrite("num_starts", &SolverConfig::num_starts);

    py::class_<PowerVector>(m, "PowerVector")
        .def_readonly("p", &PowerVector::p)
        .def("at", py::overload_cast<UserId, int>(&PowerVector::at, py::const_))
        .def("user_total", &PowerVector::user_total);

    py::class_<StrongUserMap>(m, "StrongUserMap")
        .def_readonly("uplink", &StrongUserMap::uplink)
        .def_readonly("downlink", &StrongUserMap::downlink);

    py::class_<AllocationState>(m, "AllocationState")
        .def_readonly("P", &AllocationState::P)
        .def_readonly("strong", &AllocationState::strong)
        .def_readonly("mu_d", &AllocationState::mu_d)
        .def_readonly("mu_u", &AllocationState::mu_u)
        .def_readonly("mu_sic", &AllocationState::mu_sic);

    py::class_<RunResult>(m, "RunResult")
        .def_readonly("final_state", &RunResult::final_state)
        .def_readonly("objective_trace", &RunResult::objective_trace)
        .def_readonly("per_user_rates", &RunResult::per_user_rates)
        .def_readonly("sic_residuals", &RunResult::sic_residuals)
        .def_readonly("iterations_used", &RunResult::iterations_used)
        .def_readonly("converged", &RunResult::converged)
        .def_readonly("sic_rounds_used", &RunResult::sic_rounds_used)
        .def_readonly("starts_used", &RunResult::starts_used)
        .def_readonly("selected_start", &RunResult::selected_start)
        .def_readonly("total_iterations", &RunResult::total_iterations)
        .def("to_json_str", &dump_json<RunResult>);

    py::class_<BaselineResult>(m, "BaselineResult")
        .def_readonly("algorithm", &BaselineResult::algorithm)
        .def_readonly("per_user_rates", &BaselineResult::per_user_rates)
        .def_readonly("weighted_sum_rate", &BaselineResult::weighted_sum_rate)
        .def_readonly("powers", &BaselineResult::powers)
        .def_readonly("iterations_used", &BaselineResult::iterations_used)
        .def_readonly("converged", &BaselineResult::converged)
        .def("to_json_str", &dump_json<BaselineResult>);

    py::class_<SweepSpec>(m, "SweepSpec")
        .def(py::init<>())
        .def_readwrite("swept_parameter", &SweepSpec::swept_parameter)
        .def_readwrite("values", &SweepSpec::values)
        .def_readwrite("trials_per_point", &SweepSpec::trials_per_point)
        .def_readwrite("base", &SweepSpec::base)
        .def_readwrite("solver", &SweepSpec::solver)
        .def_readwrite("algorithms", &SweepSpec::algorithms)
        .def_readwrite("seed0", &SweepSpec::seed0)
        .def_readwrite("oracle_grid_points", &SweepSpec::oracle_grid_points)
        .def_readwrite("num_threads", &SweepSpec::num_threads);

    py::class_<SweepCell>(m, "SweepCell")
        .def_readonly("mean", &SweepCell::mean)
        .def_readonly("standard_error", &SweepCell::standard_error)
        .def_readonly("trials", &SweepCell::trials)
        .def_readonly("raw", &SweepCell::raw);

    py::class_<SweepResult>(m, "SweepResult")
        .def_readonly("cells", &SweepResult::cells)
        .def("to_json_str", &dump_json<SweepResult>)
        .def("to_csv", &sweep_to_csv);

    m.def("generate_scenario", &generate_scenario, py::arg("config"), py::arg("seed"));
    m.def("generate_channels", &generate_channels, py::arg("scenario"));
    m.def("fairness_weights", &fairness_weights, py::arg("scenario"));
    m.def("select_strong_users", &select_strong_users, py::arg("channels"), py::arg("alpha"),
          py::arg("config") = SolverConfig{});
    m.def(
        "solve",
        [](const ChannelSet& H, const FairnessWeights& alpha, const Budgets& budgets,
           const SolverConfig& cfg) { return solve(H, alpha, budgets, cfg); },
        py::arg("channels"), py::arg("alpha"), py::arg("budgets"),
        py::arg("config") = SolverConfig{});
    m.def("oma_hd_waterfill", &oma_hd_waterfill, py::arg("channels"), py::arg("alpha"),
          py::arg("budgets"), py::arg("uplink_fraction") = 0.5);
    m.def(
        "oma_fd_greedy",
        [](const ChannelSet& H, const FairnessWeights& alpha, const Budgets& budgets,
           const SolverConfig& cfg) { return oma_fd_greedy(H, alpha, budgets, cfg); },
        py::arg("channels"), py::arg("alpha"), py::arg("budgets"),
        py::arg("config") = SolverConfig{});
    m.def("grid_oracle", &grid_oracle, py::arg("channels"), py::arg("alpha"), py::arg("budgets"),
          py::arg("grid_points"));
    m.def("run_sweep", &run_sweep, py::arg("spec"),
          py::call_guard<py::gil_scoped_release>());
    m.def("nats_to_bits", &nats_to_bits);
    m.def("dbm_to_watts", &dbm_to_watts);
    m.def("watts_to_dbm", &watts_to_dbm);
}
