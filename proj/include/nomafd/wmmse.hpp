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

#ifndef NOMAFD_WMMSE_HPP
#define NOMAFD_WMMSE_HPP

#include <functional>

#include "nomafd/model.hpp"
#include "nomafd/types.hpp"

namespace nomafd {

enum class SicStrategy {
    subgradient,  // dual multiplier updates on the SIC margins
    repair,       // deactivate violating weak users at convergence (default)
    ignore,       // no SIC handling, for ablation
};

enum class StrongSelector {
    max_gain,   // per-subcarrier argmax of alpha_i |h_ii|^2 (default)
    oma_wmmse,  // single-user-per-direction assignment kept as strong users
};

const char* to_string(SicStrategy s);
const char* to_string(StrongSelector s);
SicStrategy sic_strategy_from_string(const std::string& s);
StrongSelector strong_selector_from_string(const std::string& s);

struct SolverConfig {
    int max_iterations = 500;
    double objective_rel_tol = 1e-6;
    double bisection_tol = 1e-10;  // relative budget residual
    int bisection_max_steps = 100;
    SicStrategy sic_strategy = SicStrategy::repair;
    double sic_subgradient_step0 = 1.0;
    int sic_outer_rounds = 20;
    double epsilon_active = kEpsilonActiveDefault;  // watts
    StrongSelector selector = StrongSelector::max_gain;
    // Deterministic starts tried when no initial point is given: 1 uniform,
    // 2 adds an uplink-favored corner, 3 adds the downlink-favored one. The
    // best final objective wins. Block-coordinate ascent from the uniform
    // start alone lands in poor stationary points on a sizable fraction of
    // strongly-coupled instances.
    int num_starts = 3;

    void validate() const;
};

// Full iterate of the block-coordinate solver: powers, receive scalings,
// MSE weights, strong-user flags and all Lagrange multipliers.
struct AllocationState {
    PowerVector P;
    std::map<UserId, std::vector<Complex>> g;
    std::map<UserId, std::vector<double>> w;
    StrongUserMap strong;
    double mu_d = 0.0;                              // pooled downlink budget
    std::map<UserId, double> mu_u;                  // per uplink user budget
    std::map<std::pair<UserId, int>, double> mu_sic;  // per (weak user, subcarrier)
    int iteration = 0;
};

struct RunResult {
    AllocationState final_state;
    // Weighted sum rate in nats per iteration; index 0 is the initial point.
    std::vector<double> objective_trace;
    std::map<UserId, double> per_user_rates;  // nats, summed over subcarriers
    // SIC margins at convergence for pairs where both the strong and the
    // weak downlink user are still transmitting.
    std::map<std::pair<UserId, int>, double> sic_residuals;
    // Iterations of the returned (best-start) run; total_iterations sums
    // over all starts.
    int iterations_used = 0;
    bool converged = false;
    int sic_rounds_used = 1;
    // Indices into objective_trace where each SIC outer round starts;
    // monotone ascent holds within a round, not across round boundaries.
    std::vector<std::size_t> round_start_indices;
    StrongSelector selector_used = StrongSelector::max_gain;
    SicStrategy sic_strategy_used = SicStrategy::repair;
    int starts_used = 1;
    int selected_start = 0;
    int total_iterations = 0;
};

// Raised when a multiplier bisection cannot meet its budget residual
// tolerance within the step cap.
class BisectionError : public std::runtime_error {
  public:
    BisectionError(const std::string& what, double residual)
        : std::runtime_error(what), residual_(residual) {}
    double residual() const { return residual_; }

  private:
    double residual_;
};

using IterationObserver = std::function<void(int iteration, const AllocationState&)>;

/// Picks one strong user per direction per subcarrier. Ties break toward the
/// lowest user id. Both selectors assign by alpha_i |h_ii(f)|^2; oma_wmmse
/// labels the users a single-user-per-direction allocation would schedule,
/// which is that same per-subcarrier argmax (a power-only pass over a hard
/// assignment cannot move it).
StrongUserMap select_strong_users(const ChannelSet& H, const FairnessWeights& alpha,
                                  const SolverConfig& cfg);

/// Receive scalings: g_{i,f} = mmse_scaling(i, f, P, ...), a pure function
/// of the current powers.
void update_g(AllocationState& state, const ChannelSet& H);

/// MSE weights: w_{i,f} = 1 / e_{i,f} from the current (g, P).
void update_w(AllocationState& state, const ChannelSet& H);

/// Closed-form power update given (g, w): each (user, subcarrier) power is
/// the solution of an independent quadratic, with the budget multipliers
/// (mu_i per uplink user, a pooled mu over the downlink) found by bisection.
/// Active SIC multipliers add their margin-derivative terms to the uplink
/// denominators; denominators are floored at 1e-12 of their interference
/// part. Throws BisectionError if a budget residual cannot be met.
void update_p(AllocationState& state, const ChannelSet& H, const FairnessWeights& alpha,
              const Budgets& budgets, const SolverConfig& cfg);

/// One SIC enforcement round over the converged inner state. Returns the
/// number of changes made (multiplier moves or deactivations); zero means
/// the strategy reached its fixed point. outer_round starts at 1 and scales
/// the subgradient step as step0 / round.
int enforce_sic(AllocationState& state, const ChannelSet& H, const SolverConfig& cfg,
                int outer_round);

/// Full solve: strong-user selection, then block-coordinate iterations
/// g -> w -> P until the relative objective change drops below
/// objective_rel_tol (or max_iterations), with SIC enforcement rounds
/// interleaved per the configured strategy. Without an explicit initial
/// point the configured deterministic starts are tried and the best final
/// objective is returned; a caller-supplied initial point runs exactly
/// once. The observer, when set, is called after every completed iteration
/// of every start.
RunResult solve(const ChannelSet& H, const FairnessWeights& alpha, const Budgets& budgets,
                const SolverConfig& cfg = {}, const PowerVector* initial = nullptr,
                const IterationObserver& observer = {});

/// Same as solve() but with a caller-fixed strong-user map (used by the
/// orthogonal-access baselines and for forced-assignment experiments).
RunResult solve_given_strong(const ChannelSet& H, const FairnessWeights& alpha,
                             const Budgets& budgets, const StrongUserMap& strong,
                             const SolverConfig& cfg = {}, const PowerVector* initial = nullptr,
                             const IterationObserver& observer = {});

/// Uniform feasible starting point: P_U/F per (uplink user, subcarrier) and
/// P_D/(N*F) per (downlink user, subcarrier).
PowerVector uniform_initial_powers(const ChannelSet& H, const Budgets& budgets);

/// Start point start_index of the multi-start scheme: 0 uniform, 1 uplink-
/// favored (downlink damped to 1e-4 of uniform), 2 downlink-favored.
PowerVector solver_start_point(const ChannelSet& H, const Budgets& budgets, int start_index);

/// Number of users transmitting above eps on each (direction, subcarrier),
/// excluding that subcarrier's strong user.
std::map<std::pair<Direction, int>, int> weak_user_sparsity(const RunResult& result,
                                                            const UserSets& users, double eps);

}  // namespace nomafd

#endif
