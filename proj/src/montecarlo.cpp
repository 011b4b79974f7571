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

#include "nomafd/montecarlo.hpp"

#include <atomic>
#include <bit>
#include <cmath>
#include <thread>

#include "nomafd/channel.hpp"
#include "nomafd/model.hpp"
#include "nomafd/rng.hpp"

namespace nomafd {

const char* to_string(SweptParameter p) {
    return p == SweptParameter::p_d_dbm ? "p_d_dbm" : "num_users";
}

const char* to_string(Algorithm a) {
    switch (a) {
        case Algorithm::wmmse: return "wmmse";
        case Algorithm::oma_fd_greedy: return "oma_fd_greedy";
        case Algorithm::oma_hd_waterfill: return "oma_hd_waterfill";
        case Algorithm::grid_oracle: return "grid_oracle";
    }
    return "?";
}

SweptParameter swept_parameter_from_string(const std::string& s) {
    if (s == "p_d_dbm") return SweptParameter::p_d_dbm;
    if (s == "num_users") return SweptParameter::num_users;
    throw std::invalid_argument("unknown swept_parameter '" + s + "'");
}

Algorithm algorithm_from_string(const std::string& s) {
    if (s == "wmmse") return Algorithm::wmmse;
    if (s == "oma_fd_greedy") return Algorithm::oma_fd_greedy;
    if (s == "oma_hd_waterfill") return Algorithm::oma_hd_waterfill;
    if (s == "grid_oracle") return Algorithm::grid_oracle;
    throw std::invalid_argument("unknown algorithm '" + s + "'");
}

void SweepSpec::validate() const {
    if (values.empty()) throw std::invalid_argument("sweep values must be nonempty");
    for (std::size_t i = 1; i < values.size(); ++i)
        if (values[i] <= values[i - 1])
            throw std::invalid_argument("sweep values must be strictly increasing");
    if (trials_per_point < 1) throw std::invalid_argument("trials_per_point must be >= 1");
    if (algorithms.empty()) throw std::invalid_argument("need at least one algorithm");
    if (swept_parameter == SweptParameter::num_users)
        for (double v : values)
            if (v < 1.0 || v != std::floor(v))
                throw std::invalid_argument("num_users sweep values must be positive integers");
    base.validate();
    solver.validate();
}

std::uint64_t trial_seed(std::uint64_t seed0, SweptParameter parameter, double value, int trial) {
    return hash_seed({seed0, static_cast<std::uint64_t>(parameter) + 0x10,
                      std::bit_cast<std::uint64_t>(value), static_cast<std::uint64_t>(trial)});
}

std::uint64_t channel_digest(const ChannelSet& H) {
    // FNV-1a over the canonical byte stream of the gain map.
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](std::uint64_t v) {
        for (int i = 0; i < 8; ++i) {
            h ^= (v >> (8 * i)) & 0xff;
            h *= 0x100000001b3ULL;
        }
    };
    mix(static_cast<std::uint64_t>(H.num_subcarriers));
    mix(std::bit_cast<std::uint64_t>(H.noise_power_w));
    for (UserId id : H.users.all()) mix(id);
    for (const auto& [key, row] : H.gains) {
        mix(key.first);
        mix(key.second);
        for (const Complex& v : row) {
            mix(std::bit_cast<std::uint64_t>(v.real()));
            mix(std::bit_cast<std::uint64_t>(v.imag()));
        }
    }
    return h;
}

namespace {

ScenarioConfig apply_swept(const ScenarioConfig& base, SweptParameter p, double value) {
    ScenarioConfig out = base;
    if (p == SweptParameter::p_d_dbm) {
        out.p_d_dbm = value;
    } else {
        out.num_uplink_users = static_cast<int>(value);
        out.num_downlink_users = static_cast<int>(value);
    }
    return out;
}

TrialRecord run_trial(const SweepSpec& spec, double value, int trial) {
    TrialRecord rec;
    rec.value = value;
    rec.trial = trial;
    rec.seed = trial_seed(spec.seed0, spec.swept_parameter, value, trial);
    try {
        const ScenarioConfig cfg = apply_swept(spec.base, spec.swept_parameter, value);
        const Scenario scenario = generate_scenario(cfg, rec.seed);
        const ChannelSet H = generate_channels(scenario);
        const FairnessWeights alpha = fairness_weights(scenario);
        const Budgets budgets = Budgets::from_scenario(scenario);
        rec.channel_digest = channel_digest(H);
        const double norm = static_cast<double>(H.num_subcarriers);
        for (Algorithm a : spec.algorithms) {
            double wsr_nats = 0.0;
            int iterations = 0;
            bool converged = true;
            switch (a) {
                case Algorithm::wmmse: {
                    const RunResult r = solve(H, alpha, budgets, spec.solver);
                    wsr_nats = r.objective_trace.back();
                    iterations = r.iterations_used;
                    converged = r.converged;
                    break;
                }
                case Algorithm::oma_fd_greedy: {
                    const BaselineResult r = oma_fd_greedy(H, alpha, budgets, spec.solver);
                    wsr_nats = r.weighted_sum_rate;
                    iterations = r.iterations_used;
                    converged = r.converged;
                    break;
                }
                case Algorithm::oma_hd_waterfill: {
                    const BaselineResult r = oma_hd_waterfill(H, alpha, budgets);
                    wsr_nats = r.weighted_sum_rate;
                    break;
                }
                case Algorithm::grid_oracle: {
                    const BaselineResult r =
                        grid_oracle(H, alpha, budgets, spec.oracle_grid_points);
                    wsr_nats = r.weighted_sum_rate;
                    break;
                }
            }
            rec.ubar_bpshz[a] = nats_to_bits(wsr_nats) / norm;
            rec.iterations[a] = iterations;
            rec.converged[a] = converged;
        }
    } catch (const std::exception& e) {
        rec.failed = true;
        rec.error = e.what();
    }
    return rec;
}

}  // namespace

SweepResult run_sweep(const SweepSpec& spec) {
    spec.validate();

    SweepResult out;
    out.spec = spec;
    const std::size_t num_tasks = spec.values.size() * static_cast<std::size_t>(spec.trials_per_point);
    out.trials.resize(num_tasks);

    // Bounded worker pool; each task writes its own slot, so the aggregation
    // below is independent of completion order.
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t task = next.fetch_add(1); task < num_tasks; task = next.fetch_add(1)) {
            const std::size_t vi = task / static_cast<std::size_t>(spec.trials_per_point);
            const int trial = static_cast<int>(task % static_cast<std::size_t>(spec.trials_per_point));
            out.trials[task] = run_trial(spec, spec.values[vi], trial);
        }
    };
    unsigned nthreads = spec.num_threads > 0
                            ? static_cast<unsigned>(spec.num_threads)
                            : std::max(1u, std::thread::hardware_concurrency());
    nthreads = static_cast<unsigned>(std::min<std::size_t>(nthreads, num_tasks));
    std::vector<std::thread> threads;
    for (unsigned i = 1; i < nthreads; ++i) threads.emplace_back(worker);
    worker();
    for (auto& th : threads) th.join();

    for (Algorithm a : spec.algorithms) {
        for (double v : spec.values) {
            SweepCell cell;
            double iter_sum = 0.0;
            int converged_count = 0;
            for (const TrialRecord& rec : out.trials) {
                if (rec.value != v || rec.failed) continue;
                cell.raw.push_back(rec.ubar_bpshz.at(a));
                iter_sum += rec.iterations.at(a);
                converged_count += rec.converged.at(a) ? 1 : 0;
            }
            cell.trials = static_cast<int>(cell.raw.size());
            if (cell.trials > 0) {
                double sum = 0.0;
                for (double x : cell.raw) sum += x;
                cell.mean = sum / cell.trials;
                if (cell.trials > 1) {
                    double ss = 0.0;
                    for (double x : cell.raw) ss += (x - cell.mean) * (x - cell.mean);
                    cell.standard_error =
                        std::sqrt(ss / (cell.trials - 1)) / std::sqrt(static_cast<double>(cell.trials));
                }
                cell.mean_iterations = iter_sum / cell.trials;
                cell.converged_fraction = static_cast<double>(converged_count) / cell.trials;
            }
            out.cells[{a, v}] = std::move(cell);
        }
    }
    return out;
}

double cross_sinr(UserId k, int f, const PowerVector& P, const ChannelSet& H,
                  const StrongUserMap& strong) {
    const UserId istar = strong.at(Direction::downlink, f);
    if (k == istar) throw std::invalid_argument("cross_sinr expects a weak downlink user");
    const double p_k = P.at(k, f);
    if (p_k <= 0.0) return 0.0;
    // Decoding k's stream at the strong receiver happens first: everything
    // except that stream itself is still interference there.
    double denom = H.noise_power_w;
    for (UserId j : H.users.uplink) denom += H.gain2(j, istar, f) * P.at(j, f);
    const double g_ss = H.gain2(istar, istar, f);
    for (UserId d : H.users.downlink)
        if (d != k) denom += g_ss * P.at(d, f);
    return g_ss * p_k / denom;
}

IterationTrace iteration_trace_experiment(const ScenarioConfig& config, std::uint64_t seed,
                                          const SolverConfig& solver, int subcarrier) {
    if (subcarrier < 0 || subcarrier >= config.num_subcarriers)
        throw std::invalid_argument("subcarrier index out of range");
    const Scenario scenario = generate_scenario(config, seed);
    const ChannelSet H = generate_channels(scenario);
    const FairnessWeights alpha = fairness_weights(scenario);
    const Budgets budgets = Budgets::from_scenario(scenario);

    IterationTrace trace;
    trace.subcarrier = subcarrier;
    auto observer = [&](int iteration, const AllocationState& state) {
        for (UserId k : H.users.downlink) {
            if (k == state.strong.at(Direction::downlink, subcarrier)) continue;
            TracePoint pt;
            pt.iteration = iteration;
            pt.weak_user = k;
            pt.own_sinr = sinr(k, subcarrier, state.P, H, state.strong);
            pt.cross_sinr = cross_sinr(k, subcarrier, state.P, H, state.strong);
            pt.power_w = state.P.at(k, subcarrier);
            trace.points.push_back(pt);
        }
    };
    // Pick the winning start first, then trace exactly that run.
    const RunResult probe = solve(H, alpha, budgets, solver);
    const PowerVector start = solver_start_point(H, budgets, probe.selected_start);
    trace.result = solve(H, alpha, budgets, solver, &start, observer);
    trace.strong_user = trace.result.final_state.strong.at(Direction::downlink, subcarrier);
    return trace;
}

}  // namespace nomafd
