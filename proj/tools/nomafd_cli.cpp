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

#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "nomafd/channel.hpp"
#include "nomafd/serialize.hpp"

namespace {

// Exit codes: 0 success, 2 configuration error, 3 solver failure.
constexpr int kExitOk = 0;
constexpr int kExitConfigError = 2;
constexpr int kExitSolverError = 3;

struct CommonArgs {
    std::string config_path;
    std::uint64_t seed = 1;
    std::string out_path;
};

nomafd::CliConfig load_config_or_defaults(const std::string& path) {
    if (path.empty()) return nomafd::CliConfig{};
    return nomafd::load_cli_config(path);
}

void write_file(const std::string& path, const std::string& content) {
    if (const auto parent = std::filesystem::path(path).parent_path(); !parent.empty())
        std::filesystem::create_directories(parent);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
    out << content;
}

int cmd_solve(const CommonArgs& args) {
    const nomafd::CliConfig cfg = load_config_or_defaults(args.config_path);
    const nomafd::Scenario scenario = nomafd::generate_scenario(cfg.scenario, args.seed);
    const nomafd::ChannelSet H = nomafd::generate_channels(scenario);
    const nomafd::FairnessWeights alpha = nomafd::fairness_weights(scenario);
    const nomafd::RunResult result =
        nomafd::solve(H, alpha, nomafd::Budgets::from_scenario(scenario), cfg.solver);

    nlohmann::json out = nomafd::to_json(result);
    out["scenario"] = nomafd::to_json(scenario);
    write_file(args.out_path, out.dump(2) + "\n");
    return kExitOk;
}

int cmd_sweep(const CommonArgs& args, const std::vector<std::string>& algorithms) {
    nomafd::CliConfig cfg = load_config_or_defaults(args.config_path);
    if (!algorithms.empty()) {
        cfg.sweep.algorithms.clear();
        for (const auto& name : algorithms)
            cfg.sweep.algorithms.push_back(nomafd::algorithm_from_string(name));
    }
    const nomafd::SweepResult result = nomafd::run_sweep(cfg.sweep);

    std::filesystem::create_directories(args.out_path);
    const auto dir = std::filesystem::path(args.out_path);
    write_file((dir / "sweep.csv").string(), nomafd::sweep_to_csv(result));
    write_file((dir / "sweep.json").string(), nomafd::to_json(result).dump(2) + "\n");
    return kExitOk;
}

int cmd_trace(const CommonArgs& args, int subcarrier) {
    const nomafd::CliConfig cfg = load_config_or_defaults(args.config_path);
    const nomafd::IterationTrace trace =
        nomafd::iteration_trace_experiment(cfg.scenario, args.seed, cfg.solver, subcarrier);
    write_file(args.out_path, nomafd::trace_to_csv(trace));
    return kExitOk;
}

int cmd_oracle(const CommonArgs& args, int grid_points) {
    const nomafd::CliConfig cfg = load_config_or_defaults(args.config_path);
    const nomafd::Scenario scenario = nomafd::generate_scenario(cfg.scenario, args.seed);
    const nomafd::ChannelSet H = nomafd::generate_channels(scenario);
    const nomafd::FairnessWeights alpha = nomafd::fairness_weights(scenario);
    const nomafd::Budgets budgets = nomafd::Budgets::from_scenario(scenario);

    const nomafd::BaselineResult oracle = nomafd::grid_oracle(H, alpha, budgets, grid_points);
    const nomafd::RunResult wmmse = nomafd::solve(H, alpha, budgets, cfg.solver);

    const double oracle_bpshz = nomafd::nats_to_bits(oracle.weighted_sum_rate);
    const double wmmse_bpshz = nomafd::nats_to_bits(wmmse.objective_trace.back());
    nlohmann::json out{{"schema_version", nomafd::kSchemaVersion},
                       {"grid_points", grid_points},
                       {"oracle_bpshz", oracle_bpshz},
                       {"wmmse_bpshz", wmmse_bpshz},
                       {"gap_relative",
                        oracle_bpshz > 0.0 ? (oracle_bpshz - wmmse_bpshz) / oracle_bpshz : 0.0},
                       {"oracle", nomafd::to_json(oracle)},
                       {"wmmse", nomafd::to_json(wmmse)}};
    write_file(args.out_path, out.dump(2) + "\n");
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"WMMSE power allocation benchmark harness for NOMA full-duplex cells"};
    app.require_subcommand(1);

    CommonArgs args;
    int subcarrier = 0;
    int grid_points = 200;
    std::vector<std::string> algorithms;

    auto add_common = [&](CLI::App* sub, bool with_seed) {
        sub->add_option("--config", args.config_path, "JSON config file (defaults when omitted)");
        sub->add_option("--out", args.out_path, "output path")->required();
        if (with_seed) sub->add_option("--seed", args.seed, "scenario seed (default 1)");
    };

    CLI::App* solve = app.add_subcommand("solve", "run one WMMSE solve, write the result JSON");
    add_common(solve, true);
    CLI::App* sweep =
        app.add_subcommand("sweep", "run a Monte Carlo sweep, write CSV and JSON to a directory");
    add_common(sweep, false);
    sweep->add_option("--algorithms", algorithms,
                      "override the algorithm list (comma separated)")
        ->delimiter(',');
    CLI::App* trace = app.add_subcommand(
        "trace", "record per-iteration weak-user SINRs on one subcarrier as CSV");
    add_common(trace, true);
    trace->add_option("--subcarrier", subcarrier, "subcarrier index (default 0)");
    CLI::App* oracle = app.add_subcommand(
        "oracle", "compare the grid-search oracle against WMMSE on a tiny instance");
    add_common(oracle, true);
    oracle->add_option("--grid-points", grid_points, "grid points per dimension (default 200)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfigError;
    }

    try {
        if (solve->parsed()) return cmd_solve(args);
        if (sweep->parsed()) return cmd_sweep(args, algorithms);
        if (trace->parsed()) return cmd_trace(args, subcarrier);
        if (oracle->parsed()) return cmd_oracle(args, grid_points);
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return kExitSolverError;
    }
    return kExitConfigError;
}
