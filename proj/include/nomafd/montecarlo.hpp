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

#ifndef NOMAFD_MONTECARLO_HPP
#define NOMAFD_MONTECARLO_HPP

#include <cstdint>
#include <optional>
#include <string>

#include "nomafd/baselines.hpp"
#include "nomafd/types.hpp"
#include "nomafd/wmmse.hpp"

namespace nomafd {

enum class SweptParameter { p_d_dbm, num_users };
enum class Algorithm { wmmse, oma_fd_greedy, oma_hd_waterfill, grid_oracle };

const char* to_string(SweptParameter p);
const char* to_string(Algorithm a);
SweptParameter swept_parameter_from_string(const std::string& s);
Algorithm algorithm_from_string(const std::string& s);

struct SweepSpec {
    SweptParameter swept_parameter = SweptParameter::p_d_dbm;
    std::vector<double> values;  // dBm values, or user counts for num_users
    int trials_per_point = 200;
    ScenarioConfig base;
    SolverConfig solver;
    std::vector<Algorithm> algorithms = {Algorithm::wmmse, Algorithm::oma_fd_greedy,
                                         Algorithm::oma_hd_waterfill};
    std::uint64_t seed0 = 1;
    int oracle_grid_points = 200;  // only used when grid_oracle is requested
    int num_threads = 0;           // 0 = hardware concurrency

    void validate() const;
};

// One (sweep value, trial) outcome. All algorithms of a trial consume the
// identical channel realization; the digest records it for paired-sample
// audits.
struct TrialRecord {
    double value = 0.0;
    int trial = 0;
    std::uint64_t seed = 0;
    std::uint64_t channel_digest = 0;
    std::map<Algorithm, double> ubar_bpshz;  // weighted sum rate / F, bits/s/Hz
    std::map<Algorithm, int> iterations;
    std::map<Algorithm, bool> converged;
    bool failed = false;
    std::string error;
};

struct SweepCell {
    double mean = 0.0;
    double standard_error = 0.0;
    int trials = 0;
    std::vector<double> raw;
    double mean_iterations = 0.0;
    double converged_fraction = 1.0;
};

struct SweepResult {
    SweepSpec spec;
    std::vector<TrialRecord> trials;  // ordered by (value index, trial)
    std::map<std::pair<Algorithm, double>, SweepCell> cells;
};

/// Runs the Monte Carlo sweep. Trial t at sweep value v gets
/// seed = hash(seed0, parameter tag, v, t); trials execute on a bounded
/// worker pool and aggregate deterministically in (value, trial) order.
/// Per-trial solver failures are recorded and skipped in the aggregates.
SweepResult run_sweep(const SweepSpec& spec);

/// Deterministic per-trial seed (exposed for collision checks).
std::uint64_t trial_seed(std::uint64_t seed0, SweptParameter parameter, double value, int trial);

// Per-iteration view of the downlink weak users on one subcarrier: the SINR
// at their own receiver and the SINR of their stream as decoded by the
// strong user.
struct TracePoint {
    int iteration = 0;
    UserId weak_user = 0;
    double own_sinr = 0.0;
    double cross_sinr = 0.0;
    double power_w = 0.0;
};

struct IterationTrace {
    int subcarrier = 0;
    UserId strong_user = 0;
    std::vector<TracePoint> points;
    RunResult result;
};

/// SINR of weak user k's stream measured at the strong downlink user's
/// receiver, before any cancellation on that subcarrier.
double cross_sinr(UserId k, int f, const PowerVector& P, const ChannelSet& H,
                  const StrongUserMap& strong);

/// Solves one scenario while recording, for the chosen subcarrier and every
/// downlink weak user, the own/cross SINR after each iteration.
IterationTrace iteration_trace_experiment(const ScenarioConfig& config, std::uint64_t seed,
                                          const SolverConfig& solver, int subcarrier);

/// Order-independent digest of a channel realization.
std::uint64_t channel_digest(const ChannelSet& H);

}  // namespace nomafd

#endif
