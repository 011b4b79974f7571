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

#ifndef NOMAFD_SERIALIZE_HPP
#define NOMAFD_SERIALIZE_HPP

#include <string>

#include "json.hpp"
#include "nomafd/baselines.hpp"
#include "nomafd/montecarlo.hpp"
#include "nomafd/types.hpp"
#include "nomafd/wmmse.hpp"

namespace nomafd {

// All documents carry a schema_version field; complex numbers serialize as
// [re, im] pairs. Scenario and ChannelSet round-trip exactly; results are
// write-only. Rates appear in bits/s/Hz on every external surface.
inline constexpr int kSchemaVersion = 1;

nlohmann::json to_json(const Scenario& s);
Scenario scenario_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ChannelSet& H);
ChannelSet channel_set_from_json(const nlohmann::json& j);

nlohmann::json to_json(const RunResult& r);
nlohmann::json to_json(const BaselineResult& r);
nlohmann::json to_json(const SweepResult& r);

/// One row per (algorithm, sweep value):
/// algorithm,sweep_value,mean_bpshz,stderr,trials
std::string sweep_to_csv(const SweepResult& r);

/// One row per (iteration, weak user):
/// iteration,user_id,own_sinr_db,cross_sinr_db
std::string trace_to_csv(const IterationTrace& t);

// CLI configuration document: three optional sections mirroring the typed
// structures, unknown keys rejected.
struct CliConfig {
    ScenarioConfig scenario;
    SolverConfig solver;
    SweepSpec sweep;  // base and solver copied from the sections above
};

CliConfig parse_cli_config(const nlohmann::json& j);
CliConfig load_cli_config(const std::string& path);

/// Shortest round-trip decimal formatting (used for CSV).
std::string format_double(double v);

}  // namespace nomafd

#endif
