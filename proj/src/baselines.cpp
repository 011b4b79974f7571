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

#include "nomafd/baselines.hpp"

#include <atomic>
#include <cmath>
#include <numeric>
#include <thread>

#include "nomafd/model.hpp"

namespace nomafd {

namespace {

UserId argmax_direct(const std::vector<UserId>& ids, int f, const ChannelSet& H,
                     const FairnessWeights& alpha) {
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
}

// Bresenham-style spread of the half-duplex split: uplink owns ceil-steps of
// the fraction, so 0.5 maps even subcarriers to uplink.
bool hd_subcarrier_is_uplink(int f, double uplink_fraction) {
    auto steps = [&](int n) { return static_cast<int>(std::ceil(n * uplink_fraction)); };
    return steps(f + 1) - steps(f) == 1;
}

}  // namespace

std::vector<double> waterfill(const std::vector<double>& weights,
                              const std::vector<double>& noise_over_gain, double budget) {
    const std::size_t n = weights.size();
    if (noise_over_gain.size() != n)
        throw std::invalid_argument("waterfill inputs must have equal length");
    std::vector<double> powers(n, 0.0);
    if (n == 0 || budget <= 0.0) return powers;

    // Channels activate in decreasing order of marginal utility w/n; for a
    // candidate active set A the level is nu = sum_A w / (budget + sum_A n).
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return weights[a] / noise_over_gain[a] > weights[b] / noise_over_gain[b];
    });

    double w_sum = 0.0, n_sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t idx = order[k];
        if (weights[idx] <= 0.0) break;
        w_sum += weights[idx];
        n_sum += noise_over_gain[idx];
        const double nu = w_sum / (budget + n_sum);
        const bool next_inactive = k + 1 >= n || weights[order[k + 1]] <= 0.0 ||
                                   weights[order[k + 1]] / noise_over_gain[order[k + 1]] <= nu;
        if (next_inactive) {
            for (std::size_t j = 0; j <= k; ++j) {
                const std::size_t a = order[j];
                powers[a] = std::max(0.0, weights[a] / nu - noise_over_gain[a]);
            }
            break;
        }
    }
    return powers;
}

BaselineResult oma_hd_waterfill(const ChannelSet& H, const FairnessWeights& alpha,
                                const Budgets& budgets, double uplink_fraction) {
    if (uplink_fraction <= 0.0 || uplink_fraction >= 1.0)
        throw std::invalid_argument("uplink_fraction must lie in (0, 1)");
    BaselineResult res;
    res.algorithm = "oma_hd_waterfill";
    res.powers = PowerVector::zeros(H.users, H.num_subcarriers);
    for (UserId id : H.users.all()) res.per_user_rates[id] = 0.0;

    std::vector<int> ul_carriers, dl_carriers;
    for (int f = 0; f < H.num_subcarriers; ++f)
        (hd_subcarrier_is_uplink(f, uplink_fraction) ? ul_carriers : dl_carriers).push_back(f);

    for (int f : ul_carriers)
        res.assignment[{Direction::uplink, f}] = argmax_direct(H.users.uplink, f, H, alpha);
    for (int f : dl_carriers)
        res.assignment[{Direction::downlink, f}] = argmax_direct(H.users.downlink, f, H, alpha);

    // Per-uplink-user budgets over that user's carriers.
    for (UserId u : H.users.uplink) {
        std::vector<int> mine;
        for (int f : ul_carriers)
            if (res.assignment.at({Direction::uplink, f}) == u) mine.push_back(f);
        if (mine.empty()) continue;
        std::vector<double> w(mine.size(), alpha.at(u)), nog(mine.size());
        for (std::size_t j = 0; j < mine.size(); ++j)
            nog[j] = H.noise_power_w / H.gain2(u, u, mine[j]);
        const auto p = waterfill(w, nog, budgets.p_u_w);
        for (std::size_t j = 0; j < mine.size(); ++j) res.powers.at(u, mine[j]) = p[j];
    }

    // Pooled downlink budget across the downlink carriers, weighted by the
    // scheduled user's fairness weight.
    if (!dl_carriers.empty()) {
        std::vector<double> w(dl_carriers.size()), nog(dl_carriers.size());
        for (std::size_t j = 0; j < dl_carriers.size(); ++j) {
            const UserId d = res.assignment.at({Direction::downlink, dl_carriers[j]});
            w[j] = alpha.at(d);
            nog[j] = H.noise_power_w / H.gain2(d, d, dl_carriers[j]);
        }
        const auto p = waterfill(w, nog, budgets.p_d_w);
        for (std::size_t j = 0; j < dl_carriers.size(); ++j)
            res.powers.at(res.assignment.at({Direction::downlink, dl_carriers[j]}),
                          dl_carriers[j]) = p[j];
    }

    // Interference-free by construction.
    for (const auto& [key, id] : res.assignment) {
        const int f = key.second;
        const double snr = res.powers.at(id, f) * H.gain2(id, id, f) / H.noise_power_w;
        const double r = rate(snr);
        res.per_user_rates[id] += r;
        res.weighted_sum_rate += alpha.at(id) * r;
    }
    return res;
}

BaselineResult oma_fd_greedy(const ChannelSet& H, const FairnessWeights& alpha,
                             const Budgets& budgets, const SolverConfig& cfg) {
    BaselineResult res;
    res.algorithm = "oma_fd_greedy";

    StrongUserMap assigned;
    for (int f = 0; f < H.num_subcarriers; ++f) {
        assigned.uplink.push_back(argmax_direct(H.users.uplink, f, H, alpha));
        assigned.downlink.push_back(argmax_direct(H.users.downlink, f, H, alpha));
    }

    // Initial powers live only on the assigned entries; zero powers stay
    // zero under the WMMSE update, so the exclusivity is preserved without
    // an explicit mask.
    PowerVector init = PowerVector::zeros(H.users, H.num_subcarriers);
    for (UserId u : H.users.uplink) {
        std::vector<int> mine;
        for (int f = 0; f < H.num_subcarriers; ++f)
            if (assigned.at(Direction::uplink, f) == u) mine.push_back(f);
        for (int f : mine) init.at(u, f) = budgets.p_u_w / static_cast<double>(mine.size());
    }
    for (int f = 0; f < H.num_subcarriers; ++f)
        init.at(assigned.at(Direction::downlink, f), f) =
            budgets.p_d_w / static_cast<double>(H.num_subcarriers);

    const RunResult run = solve_given_strong(H, alpha, budgets, assigned, cfg, &init);

    res.per_user_rates = run.per_user_rates;
    res.weighted_sum_rate = run.objective_trace.back();
    res.powers = run.final_state.P;
    res.iterations_used = run.iterations_used;
    res.converged = run.converged;
    for (int f = 0; f < H.num_subcarriers; ++f) {
        res.assignment[{Direction::uplink, f}] = assigned.at(Direction::uplink, f);
        res.assignment[{Direction::downlink, f}] = assigned.at(Direction::downlink, f);
    }
    return res;
}

namespace {

// Dense evaluation tables for one strong-user combination of the oracle.
struct OracleTables {
    StrongUserMap strong;
    std::vector<double> direct_gain2;               // [var]
    std::vector<double> alpha;                      // [var]
    std::vector<std::vector<std::pair<int, double>>> interferers;  // [var] -> (var j, |h_ji|^2)
    // SIC rows: margin = offset + sum_j coef[j] * x[uplink var j]; the pair
    // (strong_var, weak_var) gates the check.
    struct SicRow {
        int strong_var;
        int weak_var;
        double offset;
        std::vector<std::pair<int, double>> coef;
    };
    std::vector<SicRow> sic_rows;
};

struct OracleProblem {
    std::vector<UserId> var_user;  // flattened (user, f) variables
    std::vector<int> var_carrier;
    std::vector<double> grid_step;  // per variable
    std::vector<int> var_budget_group;  // uplink users get own group, downlink -1
    double p_u_w, p_d_w;
    int grid_points;
    double noise_w;
};

int var_index(const std::vector<UserId>& var_user, const std::vector<int>& var_carrier, UserId id,
              int f) {
    for (std::size_t v = 0; v < var_user.size(); ++v)
        if (var_user[v] == id && var_carrier[v] == f) return static_cast<int>(v);
    return -1;
}

double leaf_objective(const OracleProblem& prob, const OracleTables& t,
                      const std::vector<double>& x) {
    for (const auto& row : t.sic_rows) {
        if (x[row.strong_var] <= 0.0 || x[row.weak_var] <= 0.0) continue;
        double margin = row.offset;
        for (const auto& [j, c] : row.coef) margin += c * x[j];
        if (margin < 0.0) return -std::numeric_limits<double>::infinity();
    }
    double wsr = 0.0;
    for (std::size_t v = 0; v < x.size(); ++v) {
        if (x[v] <= 0.0) continue;
        double denom = prob.noise_w;
        for (const auto& [j, g2] : t.interferers[v]) denom += g2 * x[j];
        wsr += t.alpha[v] * std::log1p(t.direct_gain2[v] * x[v] / denom);
    }
    return wsr;
}

// Depth-first walk over the remaining variables with budget pruning.
void oracle_dfs(const OracleProblem& prob, const OracleTables& t, std::vector<double>& x,
                std::size_t v, std::vector<double>& group_used, double& dl_used, double& best,
                std::vector<double>& best_x) {
    if (v == x.size()) {
        const double wsr = leaf_objective(prob, t, x);
        if (wsr > best) {
            best = wsr;
            best_x = x;
        }
        return;
    }
    const int group = prob.var_budget_group[static_cast<int>(v)];
    const double cap = group >= 0 ? prob.p_u_w : prob.p_d_w;
    double& used = group >= 0 ? group_used[group] : dl_used;
    for (int j = 0; j < prob.grid_points; ++j) {
        const double value = prob.grid_step[v] * j;
        if (used + value > cap * (1.0 + 1e-12)) break;  // grid values increase
        x[v] = value;
        used += value;
        oracle_dfs(prob, t, x, v + 1, group_used, dl_used, best, best_x);
        used -= value;
    }
    x[v] = 0.0;
}

OracleTables build_tables(const ChannelSet& H, const FairnessWeights& alpha,
                          const OracleProblem& prob, const StrongUserMap& strong) {
    OracleTables t;
    t.strong = strong;
    const std::size_t nvars = prob.var_user.size();
    t.direct_gain2.resize(nvars);
    t.alpha.resize(nvars);
    t.interferers.resize(nvars);
    for (std::size_t v = 0; v < nvars; ++v) {
        const UserId i = prob.var_user[v];
        const int f = prob.var_carrier[v];
        t.direct_gain2[v] = H.gain2(i, i, f);
        t.alpha[v] = alpha.at(i);
        for (UserId j : interference_set(i, f, strong, H.users))
            t.interferers[v].push_back(
                {var_index(prob.var_user, prob.var_carrier, j, f), H.gain2(j, i, f)});
    }
    for (int f = 0; f < H.num_subcarriers; ++f) {
        const UserId istar = strong.at(Direction::downlink, f);
        for (UserId k : H.users.downlink) {
            if (k == istar) continue;
            OracleTables::SicRow row;
            row.strong_var = var_index(prob.var_user, prob.var_carrier, istar, f);
            row.weak_var = var_index(prob.var_user, prob.var_carrier, k, f);
            const double g_ss = H.gain2(istar, istar, f);
            const double g_kk = H.gain2(k, k, f);
            row.offset = prob.noise_w * (g_ss - g_kk);
            for (UserId j : H.users.uplink)
                row.coef.push_back({var_index(prob.var_user, prob.var_carrier, j, f),
                                    g_ss * H.gain2(j, k, f) - g_kk * H.gain2(j, istar, f)});
            t.sic_rows.push_back(std::move(row));
        }
    }
    return t;
}

}  // namespace

BaselineResult grid_oracle(const ChannelSet& H, const FairnessWeights& alpha,
                           const Budgets& budgets, int grid_points) {
    const int M = static_cast<int>(H.users.uplink.size());
    const int N = static_cast<int>(H.users.downlink.size());
    const int F = H.num_subcarriers;
    if ((M + N) * F > 4)
        throw std::invalid_argument("grid_oracle supports at most 4 decision dimensions, got " +
                                    std::to_string((M + N) * F));
    if (grid_points < 2 || grid_points > 400)
        throw std::invalid_argument("grid_points must lie in [2, 400]");

    OracleProblem prob;
    prob.p_u_w = budgets.p_u_w;
    prob.p_d_w = budgets.p_d_w;
    prob.grid_points = grid_points;
    prob.noise_w = H.noise_power_w;
    int group = 0;
    for (UserId u : H.users.uplink) {
        for (int f = 0; f < F; ++f) {
            prob.var_user.push_back(u);
            prob.var_carrier.push_back(f);
            prob.grid_step.push_back(budgets.p_u_w / (grid_points - 1));
            prob.var_budget_group.push_back(group);
        }
        ++group;
    }
    for (UserId d : H.users.downlink) {
        for (int f = 0; f < F; ++f) {
            prob.var_user.push_back(d);
            prob.var_carrier.push_back(f);
            prob.grid_step.push_back(budgets.p_d_w / (grid_points - 1));
            prob.var_budget_group.push_back(-1);
        }
    }

    // Enumerate strong-user choices: per subcarrier any (uplink, downlink)
    // pair can carry the flags.
    std::vector<StrongUserMap> combos;
    {
        StrongUserMap current;
        current.uplink.assign(F, 0);
        current.downlink.assign(F, 0);
        std::function<void(int)> rec = [&](int f) {
            if (f == F) {
                combos.push_back(current);
                return;
            }
            for (UserId u : H.users.uplink)
                for (UserId d : H.users.downlink) {
                    current.uplink[f] = u;
                    current.downlink[f] = d;
                    rec(f + 1);
                }
        };
        rec(0);
    }

    std::vector<OracleTables> tables;
    tables.reserve(combos.size());
    for (const auto& c : combos) tables.push_back(build_tables(H, alpha, prob, c));

    // Work items: (combo, first-variable grid index). Each item runs a
    // sequential DFS; reduction prefers higher value, then lower item index,
    // which keeps the result independent of thread scheduling.
    struct ItemBest {
        double wsr = -std::numeric_limits<double>::infinity();
        std::vector<double> x;
        std::size_t combo = 0;
    };
    const std::size_t num_items = tables.size() * static_cast<std::size_t>(grid_points);
    std::vector<ItemBest> item_best(num_items);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t item = next.fetch_add(1); item < num_items; item = next.fetch_add(1)) {
            const std::size_t combo = item / static_cast<std::size_t>(grid_points);
            const int j0 = static_cast<int>(item % static_cast<std::size_t>(grid_points));
            const double v0 = prob.grid_step[0] * j0;
            const int group0 = prob.var_budget_group[0];
            const double cap0 = group0 >= 0 ? prob.p_u_w : prob.p_d_w;
            if (v0 > cap0 * (1.0 + 1e-12)) continue;
            std::vector<double> x(prob.var_user.size(), 0.0);
            std::vector<double> group_used(static_cast<std::size_t>(M), 0.0);
            double dl_used = 0.0;
            x[0] = v0;
            (group0 >= 0 ? group_used[group0] : dl_used) += v0;
            ItemBest& slot = item_best[item];
            slot.combo = combo;
            oracle_dfs(prob, tables[combo], x, 1, group_used, dl_used, slot.wsr, slot.x);
        }
    };
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const unsigned nthreads =
        static_cast<unsigned>(std::min<std::size_t>(std::min<std::size_t>(hw, 8), num_items));
    std::vector<std::thread> threads;
    for (unsigned i = 1; i < nthreads; ++i) threads.emplace_back(worker);
    worker();
    for (auto& th : threads) th.join();

    std::size_t best_item = 0;
    for (std::size_t i = 1; i < num_items; ++i)
        if (item_best[i].wsr > item_best[best_item].wsr) best_item = i;
    const ItemBest& best = item_best[best_item];
    if (!std::isfinite(best.wsr))
        throw std::runtime_error("grid_oracle found no feasible point");  // zero is always feasible

    BaselineResult res;
    res.algorithm = "grid_oracle";
    res.weighted_sum_rate = best.wsr;
    res.powers = PowerVector::zeros(H.users, F);
    for (std::size_t v = 0; v < prob.var_user.size(); ++v)
        res.powers.at(prob.var_user[v], prob.var_carrier[v]) = best.x[v];
    const StrongUserMap& strong = tables[best.combo].strong;
    for (int f = 0; f < F; ++f) {
        res.assignment[{Direction::uplink, f}] = strong.at(Direction::uplink, f);
        res.assignment[{Direction::downlink, f}] = strong.at(Direction::downlink, f);
    }
    for (UserId id : H.users.all()) {
        double total = 0.0;
        for (int f = 0; f < F; ++f) total += rate(sinr(id, f, res.powers, H, strong));
        res.per_user_rates[id] = total;
    }
    return res;
}

}  // namespace nomafd
