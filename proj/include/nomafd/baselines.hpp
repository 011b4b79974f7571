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

#ifndef NOMAFD_BASELINES_HPP
#define NOMAFD_BASELINES_HPP

#include "nomafd/types.hpp"
#include "nomafd/wmmse.hpp"

namespace nomafd {

struct BaselineResult {
    std::string algorithm;
    std::map<UserId, double> per_user_rates;  // nats, summed over subcarriers
    double weighted_sum_rate = 0.0;           // nats
    // At most one scheduled user per (direction, subcarrier); half-duplex
    // leaves the other direction's slot absent.
    std::map<std::pair<Direction, int>, UserId> assignment;
    PowerVector powers;
    int iterations_used = 0;
    bool converged = true;
};

/// Exact weighted water-filling: maximizes sum_k weight_k log(1 + p_k /
/// noise_over_gain_k) subject to sum p_k <= budget, p >= 0. Solved in closed
/// form over the active set; no iteration.
std::vector<double> waterfill(const std::vector<double>& weights,
                              const std::vector<double>& noise_over_gain, double budget);

/// Orthogonal half-duplex baseline: subcarriers are split between the two
/// directions (default even indices uplink, odd downlink), each subcarrier
/// goes to the user maximizing alpha_i |h_ii(f)|^2, and powers water-fill
/// each direction's budget. No cross-direction interference by construction.
BaselineResult oma_hd_waterfill(const ChannelSet& H, const FairnessWeights& alpha,
                                const Budgets& budgets, double uplink_fraction = 0.5);

/// Orthogonal full-duplex baseline: one uplink and one downlink user per
/// subcarrier by alpha_i |h_ii(f)|^2, powers from the WMMSE loop restricted
/// to the assigned users (everyone else pinned to zero). Cross-direction
/// interference is fully modeled.
BaselineResult oma_fd_greedy(const ChannelSet& H, const FairnessWeights& alpha,
                             const Budgets& budgets, const SolverConfig& cfg = {});

/// Exhaustive search over the quantized power box for tiny instances
/// ((M+N)*F <= 4, grid_points <= 400 per dimension), enumerating strong-user
/// choices and filtering SIC-infeasible points. Grid values are uniform in
/// watts and include zero; budget-violating points are skipped.
BaselineResult grid_oracle(const ChannelSet& H, const FairnessWeights& alpha,
                           const Budgets& budgets, int grid_points);

}  // namespace nomafd

#endif
