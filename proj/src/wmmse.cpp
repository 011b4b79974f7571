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

#include "nomafd/wmmse.hpp"

#include <cmath>
#include <limits>

namespace nomafd {

namespace {

// Floor factor for the power-update denominator, relative to its
// interference part. Negative SIC margin derivatives can otherwise drive
// the denominator through zero.
constexpr double kDenominatorFloorScale = 1e-12;

double relative_change(double current, double previous) {
    return std::abs(current - previous) / std::max(std::abs(previous), 1e-12);
}

// Solution of one per-(user, subcarrier) quadratic: P = (b / denom)^2 with
// denom = base + multiplier, floored at kDenominatorFloorScale * a0.
double quadratic_power(double b, double base, double multiplier, double a0) {
    if (b <= 0.0) return 0.0;
    double denom = base + multiplier;
    const double floor_value = kDenominatorFloorScale * a0;
    if (denom < floor_value) denom = floor_value;
    const double q = b / denom;
    return q * q;
}

// Budget multiplier search shared by the per-uplink-user and pooled
// downlink constraints. `eval` maps a multiplier to the total allocated
// power (filling its output buffer); totals are strictly nonincreasing in
// the multiplier. Returns 0 when the unconstrained powers already fit.
template <typename Eval>
double solve_budget_multiplier(Eval&& eval, double budget, const SolverConfig& cfg,
                               const std::string& what) {
    if (eval(0.0) <= budget) return 0.0;

    double hi = 1.0;
    while (eval(hi) > budget) {
        hi *= 8.0;
        if (hi > 1e300)
            throw BisectionError("bisection bracket overflow for " + what, eval(hi) - budget);
    }
    double lo = hi > 1.0 ? hi / 8.0 : 0.0;

    // Collapse the bracket fully; the tolerance only decides failure at the
    // step cap, it is not an early-exit target.
    for (int step = 0; step < cfg.bisection_max_steps && (hi - lo) > 1e-15 * hi; ++step) {
        const double mid = 0.5 * (lo + hi);
        if (eval(mid) > budget)
            lo = mid;
        else
            hi = mid;
    }
    const double total = eval(hi);  // feasible side: total <= budget
    const double residual = budget - total;
    if (residual > cfg.bisection_tol * budget)
        throw BisectionError("budget bisection for " + what + " stalled with residual " +
                                 std::to_string(residual),
                             residual);
    return hi;
}

}  // namespace

const char* to_string(SicStrategy s) {
    switch (s) {
        case SicStrategy::subgradient: return "subgradient";
        case SicStrategy::repair: return "repair";
        case SicStrategy::ignore: return "ignore";
    }
    return "?";
}

const char* to_string(StrongSelector s) {
    return s == StrongSelector::max_gain ? "max_gain" : "oma_wmmse";
}

SicStrategy sic_strategy_from_string(const std::string& s) {
    if (s == "subgradient") return SicStrategy::subgradient;
    if (s == "repair") return SicStrategy::repair;
    if (s == "ignore") return SicStrategy::ignore;
    throw std::invalid_argument("unknown sic_strategy '" + s + "'");
}

StrongSelector strong_selector_from_string(const std::string& s) {
    if (s == "max_gain") return StrongSelector::max_gain;
    if (s == "oma_wmmse") return StrongSelector::oma_wmmse;
    throw std::invalid_argument("unknown selector '" + s + "'");
}

void SolverConfig::validate() const {
    if (max_iterations < 1) throw std::invalid_argument("max_iterations must be >= 1");
    if (objective_rel_tol <= 0.0) throw std::invalid_argument("objective_rel_tol must be > 0");
    if (bisection_tol <= 0.0) throw std::invalid_argument("bisection_tol must be > 0");
    if (bisection_max_steps < 1) throw std::invalid_argument("bisection_max_steps must be >= 1");
    if (sic_outer_rounds < 1) throw std::invalid_argument("sic_outer_rounds must be >= 1");
    if (sic_subgradient_step0 <= 0.0)
        throw std::invalid_argument("sic_subgradient_step0 must be > 0");
    if (epsilon_active <= 0.0) throw std::invalid_argument("epsilon_active must be > 0");
    if (num_starts < 1 || num_starts > 3)
        throw std::invalid_argument("num_starts must lie in [1, 3]");
}

StrongUserMap select_strong_users(const ChannelSet& H, const FairnessWeights& alpha,
                                  const SolverConfig& cfg) {
    (void)cfg;  // both selectors reduce to the same per-subcarrier argmax
    auto argmax_dir = [&](const std::vector<UserId>& ids, int f) {
        UserId best = ids.front();
        double best_score = -1.0;
        for (UserId i : ids) {
            const double score = alpha.at(i) * H.gain2(i, i, f);
            if (score > best_score || (score == best_score && i < best)) {
                best = i;
                best_score = score;
            }
        }
        return best;
    };
    StrongUserMap strong;
    for (int f = 0; f < H.num_subcarriers; ++f) {
        strong.uplink.push_back(argmax_dir(H.users.uplink, f));
        strong.downlink.push_back(argmax_dir(H.users.downlink, f));
    }
    return strong;
}

void update_g(AllocationState& state, const ChannelSet& H) {
    for (UserId i : H.users.all()) {
        auto& row = state.g[i];
        row.resize(static_cast<std::size_t>(H.num_subcarriers));
        for (int f = 0; f < H.num_subcarriers; ++f)
            row[static_cast<std::size_t>(f)] = mmse_scaling(i, f, state.P, H, state.strong);
    }
}

void update_w(AllocationState& state, const ChannelSet& H) {
    for (UserId i : H.users.all()) {
        const auto& g_row = state.g.at(i);
        auto& w_row = state.w[i];
        w_row.resize(static_cast<std::size_t>(H.num_subcarriers));
        for (int f = 0; f < H.num_subcarriers; ++f)
            w_row[static_cast<std::size_t>(f)] =
                1.0 / mse(i, f, g_row[static_cast<std::size_t>(f)], state.P, H, state.strong);
    }
}

void update_p(AllocationState& state, const ChannelSet& H, const FairnessWeights& alpha,
              const Budgets& budgets, const SolverConfig& cfg) {
    const int F = H.num_subcarriers;
    const std::size_t Fz = static_cast<std::size_t>(F);

    // Quadratic coefficients per (user, subcarrier), from the frozen (g, w):
    //   b  = alpha_i w_if Re(g_if h_ii)
    //   a0 = alpha_i w_if |g_if h_ii|^2 + sum_{t in C(i,f)} alpha_t w_tf |g_tf h_it|^2
    std::map<UserId, std::vector<double>> bcoef, acoef;
    for (UserId i : H.users.all()) {
        auto& b_row = bcoef[i];
        auto& a_row = acoef[i];
        b_row.assign(Fz, 0.0);
        a_row.assign(Fz, 0.0);
        const auto& g_row = state.g.at(i);
        const auto& w_row = state.w.at(i);
        for (int f = 0; f < F; ++f) {
            const std::size_t fz = static_cast<std::size_t>(f);
            const Complex gh = g_row[fz] * H.gain(i, i, f);
            const double aw = alpha.at(i) * w_row[fz];
            b_row[fz] = aw * gh.real();
            double a0 = aw * std::norm(gh);
            for (UserId t : cochannel_set(i, f, state.strong, H.users))
                a0 += alpha.at(t) * state.w.at(t)[fz] *
                      std::norm(state.g.at(t)[fz] * H.gain(i, t, f));
            a_row[fz] = a0;
        }
    }

    // SIC margin derivatives enter the uplink denominators, gated on the
    // previous iteration's weak-user powers.
    std::map<UserId, std::vector<double>> sic_term;
    for (UserId i : H.users.uplink) sic_term[i].assign(Fz, 0.0);
    for (const auto& [key, mu] : state.mu_sic) {
        if (mu <= 0.0) continue;
        const auto [k, f] = key;
        if (state.P.at(k, f) <= cfg.epsilon_active) continue;
        const UserId istar = state.strong.at(Direction::downlink, f);
        const double g_ss = H.gain2(istar, istar, f);
        const double g_kk = H.gain2(k, k, f);
        for (UserId i : H.users.uplink) {
            const double theta = g_ss * H.gain2(i, k, f) - g_kk * H.gain2(i, istar, f);
            sic_term[i][static_cast<std::size_t>(f)] += mu * theta;
        }
    }

    PowerVector next = state.P;

    // Per-uplink-user budgets: independent bisections.
    for (UserId i : H.users.uplink) {
        const auto& b_row = bcoef.at(i);
        const auto& a_row = acoef.at(i);
        const auto& s_row = sic_term.at(i);
        std::vector<double> powers(Fz, 0.0);
        auto eval = [&](double mu) {
            double total = 0.0;
            for (std::size_t f = 0; f < Fz; ++f) {
                powers[f] = quadratic_power(b_row[f], a_row[f] + s_row[f], mu, a_row[f]);
                total += powers[f];
            }
            return total;
        };
        const double mu = solve_budget_multiplier(eval, budgets.p_u_w, cfg,
                                                  "uplink user " + std::to_string(i));
        eval(mu);
        state.mu_u[i] = mu;
        next.p[i] = powers;
    }

    // Pooled downlink budget: one bisection over all downlink users.
    {
        std::map<UserId, std::vector<double>> powers;
        for (UserId d : H.users.downlink) powers[d].assign(Fz, 0.0);
        auto eval = [&](double mu) {
            double total = 0.0;
            for (UserId d : H.users.downlink) {
                const auto& b_row = bcoef.at(d);
                const auto& a_row = acoef.at(d);
                auto& p_row = powers.at(d);
                for (std::size_t f = 0; f < Fz; ++f) {
                    p_row[f] = quadratic_power(b_row[f], a_row[f], mu, a_row[f]);
                    total += p_row[f];
                }
            }
            return total;
        };
        const double mu = solve_budget_multiplier(eval, budgets.p_d_w, cfg, "downlink pool");
        eval(mu);
        state.mu_d = mu;
        for (UserId d : H.users.downlink) next.p[d] = powers.at(d);
    }

    state.P = std::move(next);
}

int enforce_sic(AllocationState& state, const ChannelSet& H, const SolverConfig& cfg,
                int outer_round) {
    if (cfg.sic_strategy == SicStrategy::ignore) return 0;
    int changes = 0;
    for (int f = 0; f < H.num_subcarriers; ++f) {
        const UserId istar = state.strong.at(Direction::downlink, f);
        if (state.P.at(istar, f) <= cfg.epsilon_active) continue;
        for (UserId k : H.users.downlink) {
            if (k == istar || state.P.at(k, f) <= cfg.epsilon_active) continue;
            const double margin = gamma_sic(k, istar, f, state.P, H);
            if (cfg.sic_strategy == SicStrategy::subgradient) {
                const double step = cfg.sic_subgradient_step0 / static_cast<double>(outer_round);
                auto& mu = state.mu_sic[{k, f}];
                const double updated = std::max(0.0, mu - step * margin);
                if (updated != mu) {
                    mu = updated;
                    ++changes;
                }
            } else if (margin < 0.0) {  // repair: drop the weak stream
                state.P.at(k, f) = 0.0;
                ++changes;
            }
        }
    }
    return changes;
}

PowerVector uniform_initial_powers(const ChannelSet& H, const Budgets& budgets) {
    PowerVector P = PowerVector::zeros(H.users, H.num_subcarriers);
    const double F = static_cast<double>(H.num_subcarriers);
    for (UserId u : H.users.uplink)
        for (auto& v : P.p.at(u)) v = budgets.p_u_w / F;
    const double per_dl = budgets.p_d_w / (F * static_cast<double>(H.users.downlink.size()));
    for (UserId d : H.users.downlink)
        for (auto& v : P.p.at(d)) v = per_dl;
    return P;
}

PowerVector solver_start_point(const ChannelSet& H, const Budgets& budgets, int start_index) {
    PowerVector P = uniform_initial_powers(H, budgets);
    if (start_index == 1) {
        for (UserId d : H.users.downlink)
            for (double& v : P.p.at(d)) v *= 1e-4;
    } else if (start_index == 2) {
        for (UserId u : H.users.uplink)
            for (double& v : P.p.at(u)) v *= 1e-4;
    } else if (start_index != 0) {
        throw std::invalid_argument("start_index must lie in [0, 2]");
    }
    return P;
}

namespace {

void validate_problem(const ChannelSet& H, const FairnessWeights& alpha, const Budgets& budgets,
                      const StrongUserMap& strong) {
    if (H.users.uplink.empty() || H.users.downlink.empty())
        throw std::invalid_argument("need at least one user per direction");
    if (H.num_subcarriers < 1) throw std::invalid_argument("need at least one subcarrier");
    if (H.noise_power_w <= 0.0) throw std::invalid_argument("noise power must be positive");
    if (budgets.p_u_w <= 0.0 || budgets.p_d_w <= 0.0)
        throw std::invalid_argument("power budgets must be positive");
    if (strong.num_subcarriers() != H.num_subcarriers)
        throw std::invalid_argument("strong-user map does not match subcarrier count");
    for (UserId id : H.users.all())
        if (alpha.alpha.find(id) == alpha.alpha.end())
            throw std::invalid_argument("missing fairness weight for user " + std::to_string(id));
    for (int f = 0; f < H.num_subcarriers; ++f) {
        if (!H.users.is_uplink(strong.at(Direction::uplink, f)))
            throw std::invalid_argument("strong uplink user is not an uplink user");
        if (!H.users.is_downlink(strong.at(Direction::downlink, f)))
            throw std::invalid_argument("strong downlink user is not a downlink user");
    }
}

RunResult solve_impl(const ChannelSet& H, const FairnessWeights& alpha, const Budgets& budgets,
                     const StrongUserMap& strong, const SolverConfig& cfg,
                     const PowerVector* initial, const IterationObserver& observer,
                     StrongSelector selector_used) {
    cfg.validate();
    validate_problem(H, alpha, budgets, strong);

    const int F = H.num_subcarriers;
    AllocationState state;
    state.strong = strong;
    state.P = initial ? *initial : uniform_initial_powers(H, budgets);
    for (UserId id : H.users.all()) {
        if (state.P.p.find(id) == state.P.p.end() ||
            state.P.p.at(id).size() != static_cast<std::size_t>(F))
            throw std::invalid_argument("initial powers do not match the problem dimensions");
        state.g[id].assign(static_cast<std::size_t>(F), Complex{0.0, 0.0});
        state.w[id].assign(static_cast<std::size_t>(F), 1.0);
    }
    for (UserId u : H.users.uplink) state.mu_u[u] = 0.0;
    for (int f = 0; f < F; ++f)
        for (UserId k : H.users.downlink)
            if (k != strong.at(Direction::downlink, f)) state.mu_sic[{k, f}] = 0.0;

    RunResult res;
    res.selector_used = selector_used;
    res.sic_strategy_used = cfg.sic_strategy;
    res.objective_trace.push_back(weighted_sum_rate(state.P, H, strong, alpha));
    res.round_start_indices.push_back(0);

    const int max_rounds =
        cfg.sic_strategy == SicStrategy::ignore
            ? 1
            : (cfg.sic_strategy == SicStrategy::repair
                   ? static_cast<int>(H.users.downlink.size()) * F + 1
                   : cfg.sic_outer_rounds);

    bool last_round_converged = false;
    bool sic_fixed_point = cfg.sic_strategy == SicStrategy::ignore;
    for (int round = 1; round <= max_rounds; ++round) {
        res.sic_rounds_used = round;
        last_round_converged = false;
        for (int it = 0; it < cfg.max_iterations; ++it) {
            update_g(state, H);
            update_w(state, H);
            update_p(state, H, alpha, budgets, cfg);
            ++state.iteration;
            const double obj = weighted_sum_rate(state.P, H, strong, alpha);
            const double prev = res.objective_trace.back();
            res.objective_trace.push_back(obj);
            if (observer) observer(state.iteration, state);
            if (relative_change(obj, prev) < cfg.objective_rel_tol) {
                last_round_converged = true;
                break;
            }
        }
        if (cfg.sic_strategy == SicStrategy::ignore) break;
        if (enforce_sic(state, H, cfg, round) == 0) {
            sic_fixed_point = true;
            break;
        }
        if (round < max_rounds) res.round_start_indices.push_back(res.objective_trace.size());
    }

    // Leave (g, w) consistent with the final powers; both updates are pure
    // functions of the state they read, so re-running them afterwards is a
    // no-op.
    update_g(state, H);
    update_w(state, H);

    res.iterations_used = state.iteration;
    res.converged =
        last_round_converged && (cfg.sic_strategy != SicStrategy::repair || sic_fixed_point);
    for (UserId id : H.users.all()) {
        double total = 0.0;
        for (int f = 0; f < F; ++f) total += rate(sinr(id, f, state.P, H, strong));
        res.per_user_rates[id] = total;
    }
    for (int f = 0; f < F; ++f) {
        const UserId istar = strong.at(Direction::downlink, f);
        if (state.P.at(istar, f) <= cfg.epsilon_active) continue;
        for (UserId k : H.users.downlink)
            if (k != istar && state.P.at(k, f) > cfg.epsilon_active)
                res.sic_residuals[{k, f}] = gamma_sic(k, istar, f, state.P, H);
    }
    res.final_state = std::move(state);
    return res;
}

// A caller-supplied start runs once; otherwise the deterministic starts
// (uniform, uplink-favored, downlink-favored) compete on the final
// objective. Corner starts keep the damped direction at 1e-4 of uniform,
// small enough to concede the contested resources yet nonzero so the
// direction can regrow (exact zeros are absorbing).
RunResult solve_multi(const ChannelSet& H, const FairnessWeights& alpha, const Budgets& budgets,
                      const StrongUserMap& strong, const SolverConfig& cfg,
                      const PowerVector* initial, const IterationObserver& observer,
                      StrongSelector selector_used) {
    if (initial) {
        RunResult res =
            solve_impl(H, alpha, budgets, strong, cfg, initial, observer, selector_used);
        res.total_iterations = res.iterations_used;
        return res;
    }
    cfg.validate();
    std::vector<PowerVector> starts;
    for (int k = 0; k < cfg.num_starts; ++k) starts.push_back(solver_start_point(H, budgets, k));

    RunResult best;
    int total = 0;
    for (std::size_t k = 0; k < starts.size(); ++k) {
        RunResult run =
            solve_impl(H, alpha, budgets, strong, cfg, &starts[k], observer, selector_used);
        total += run.iterations_used;
        if (k == 0 || run.objective_trace.back() > best.objective_trace.back()) {
            best = std::move(run);
            best.selected_start = static_cast<int>(k);
        }
    }
    best.starts_used = static_cast<int>(starts.size());
    best.total_iterations = total;
    return best;
}

}  // namespace

RunResult solve(const ChannelSet& H, const FairnessWeights& alpha, const Budgets& budgets,
                const SolverConfig& cfg, const PowerVector* initial,
                const IterationObserver& observer) {
    const StrongUserMap strong = select_strong_users(H, alpha, cfg);
    return solve_multi(H, alpha, budgets, strong, cfg, initial, observer, cfg.selector);
}

RunResult solve_given_strong(const ChannelSet& H, const FairnessWeights& alpha,
                             const Budgets& budgets, const StrongUserMap& strong,
                             const SolverConfig& cfg, const PowerVector* initial,
                             const IterationObserver& observer) {
    return solve_multi(H, alpha, budgets, strong, cfg, initial, observer, cfg.selector);
}

std::map<std::pair<Direction, int>, int> weak_user_sparsity(const RunResult& result,
                                                            const UserSets& users, double eps) {
    std::map<std::pair<Direction, int>, int> counts;
    const auto& state = result.final_state;
    const int F = state.strong.num_subcarriers();
    for (int f = 0; f < F; ++f) {
        int ul = 0, dl = 0;
        for (UserId u : users.uplink)
            if (u != state.strong.at(Direction::uplink, f) && state.P.at(u, f) > eps) ++ul;
        for (UserId d : users.downlink)
            if (d != state.strong.at(Direction::downlink, f) && state.P.at(d, f) > eps) ++dl;
        counts[{Direction::uplink, f}] = ul;
        counts[{Direction::downlink, f}] = dl;
    }
    return counts;
}

}  // namespace nomafd
