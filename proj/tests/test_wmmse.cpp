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

#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "nomafd/model.hpp"
#include "nomafd/wmmse.hpp"

using namespace nomafd;

namespace {

StrongUserMap fixed_strong(UserId ul, UserId dl, int F) {
    StrongUserMap s;
    s.uplink.assign(static_cast<std::size_t>(F), ul);
    s.downlink.assign(static_cast<std::size_t>(F), dl);
    return s;
}

// Independent 2-D grid oracle for M=N=1, F=1 instances.
double grid_search_2d(const ChannelSet& H, const FairnessWeights& alpha, const Budgets& budgets,
                      int points) {
    const UserId u = H.users.uplink.front();
    const UserId d = H.users.downlink.front();
    const StrongUserMap strong = fixed_strong(u, d, 1);
    double best = 0.0;
    PowerVector P = PowerVector::zeros(H.users, 1);
    for (int i = 0; i < points; ++i)
        for (int j = 0; j < points; ++j) {
            P.at(u, 0) = budgets.p_u_w * i / (points - 1);
            P.at(d, 0) = budgets.p_d_w * j / (points - 1);
            best = std::max(best, weighted_sum_rate(P, H, strong, alpha));
        }
    return best;
}

// Closed-form two-channel water-filling for a single user.
std::pair<double, double> waterfill_two_channels(double n1, double n2, double budget) {
    // try both channels active
    const double level = (budget + n1 + n2) / 2.0;
    if (level >= n1 && level >= n2) return {level - n1, level - n2};
    return n1 < n2 ? std::make_pair(budget, 0.0) : std::make_pair(0.0, budget);
}

// Single user per direction, no cross coupling: both directions decouple
// into clean water-filling problems.
testing::ManualChannels decoupled_instance(int F, std::uint64_t seed) {
    testing::ManualChannels mc(1, 1, F, 1e-13);
    Rng rng(seed);
    for (int f = 0; f < F; ++f) {
        mc.set_direct(0, f, 3e-5 * rng.complex_normal());
        mc.set_direct(1, f, 3e-5 * rng.complex_normal());
    }
    return mc;
}

FairnessWeights unit_alpha(const UserSets& users) {
    FairnessWeights w;
    for (UserId id : users.all()) w.alpha[id] = 1.0;
    return w;
}

}  // namespace

TEST_CASE("strong-user selection") {
    SECTION("singletons are strong everywhere") {
        const auto inst = testing::random_instance(1, 1, 3, 5);
        const StrongUserMap s = select_strong_users(inst.channels, inst.alpha, {});
        for (int f = 0; f < 3; ++f) {
            CHECK(s.at(Direction::uplink, f) == inst.channels.users.uplink.front());
            CHECK(s.at(Direction::downlink, f) == inst.channels.users.downlink.front());
        }
    }
    SECTION("argmax of alpha-weighted gain wins") {
        testing::ManualChannels mc(2, 1, 1, 1e-13);
        mc.set_direct(0, 0, {std::sqrt(2.0), 0.0});
        mc.set_direct(1, 0, {std::sqrt(3.0), 0.0});
        mc.set_direct(2, 0, {1.0, 0.0});
        const StrongUserMap s =
            select_strong_users(mc.channels(), unit_alpha(mc.channels().users), {});
        CHECK(s.at(Direction::uplink, 0) == 1);
    }
    SECTION("matches an exhaustive scan on random instances") {
        for (std::uint64_t seed : {3ull, 8ull, 21ull}) {
            const auto inst = testing::random_instance(3, 4, 6, seed);
            const StrongUserMap s = select_strong_users(inst.channels, inst.alpha, {});
            for (int f = 0; f < 6; ++f) {
                for (UserId i : inst.channels.users.uplink)
                    CHECK(inst.alpha.at(i) * inst.channels.gain2(i, i, f) <=
                          inst.alpha.at(s.at(Direction::uplink, f)) *
                              inst.channels.gain2(s.at(Direction::uplink, f),
                                                  s.at(Direction::uplink, f), f));
                for (UserId i : inst.channels.users.downlink)
                    CHECK(inst.alpha.at(i) * inst.channels.gain2(i, i, f) <=
                          inst.alpha.at(s.at(Direction::downlink, f)) *
                              inst.channels.gain2(s.at(Direction::downlink, f),
                                                  s.at(Direction::downlink, f), f));
            }
        }
    }
    SECTION("both selectors agree on the assignment") {
        const auto inst = testing::random_instance(3, 3, 6, 13);
        SolverConfig oma;
        oma.selector = StrongSelector::oma_wmmse;
        const StrongUserMap a = select_strong_users(inst.channels, inst.alpha, {});
        const StrongUserMap b = select_strong_users(inst.channels, inst.alpha, oma);
        CHECK(a.uplink == b.uplink);
        CHECK(a.downlink == b.downlink);
    }
}

TEST_CASE("receive-scaling update") {
    const auto inst = testing::random_instance(2, 2, 3, 33);
    const auto& H = inst.channels;
    AllocationState state;
    state.strong = select_strong_users(H, inst.alpha, {});

    SECTION("zero powers give zero scalings") {
        state.P = PowerVector::zeros(H.users, 3);
        update_g(state, H);
        for (UserId id : H.users.all())
            for (const Complex& g : state.g.at(id)) CHECK(g == Complex{0.0, 0.0});
    }
    SECTION("batch equals the scalar map") {
        state.P = testing::random_powers(H, inst.budgets, 71);
        update_g(state, H);
        for (UserId id : H.users.all())
            for (int f = 0; f < 3; ++f)
                CHECK(state.g.at(id)[f] == mmse_scaling(id, f, state.P, H, state.strong));
    }
}

TEST_CASE("weight update") {
    SECTION("unit error maps to unit weight") {
        const auto inst = testing::random_instance(1, 1, 2, 3);
        AllocationState state;
        state.strong = fixed_strong(0, 1, 2);
        state.P = PowerVector::zeros(inst.channels.users, 2);
        update_g(state, inst.channels);
        update_w(state, inst.channels);
        for (UserId id : inst.channels.users.all())
            for (double w : state.w.at(id)) CHECK(w == 1.0);
    }
    SECTION("unit SNR doubles the weight") {
        testing::ManualChannels mc(1, 1, 1, 1e-13);
        mc.set_direct(0, 0, {1.0, 0.0});
        mc.set_direct(1, 0, {1.0, 0.0});
        AllocationState state;
        state.strong = fixed_strong(0, 1, 1);
        state.P = PowerVector::zeros(mc.channels().users, 1);
        state.P.at(0, 0) = 1e-13;
        update_g(state, mc.channels());
        update_w(state, mc.channels());
        CHECK(state.w.at(0)[0] == Catch::Approx(2.0).epsilon(1e-12));
    }
    SECTION("weights are exact reciprocals of the errors") {
        const auto inst = testing::random_instance(3, 2, 4, 51);
        AllocationState state;
        state.strong = select_strong_users(inst.channels, inst.alpha, {});
        state.P = testing::random_powers(inst.channels, inst.budgets, 4);
        update_g(state, inst.channels);
        update_w(state, inst.channels);
        for (UserId id : inst.channels.users.all())
            for (int f = 0; f < 4; ++f) {
                const double e =
                    mse(id, f, state.g.at(id)[f], state.P, inst.channels, state.strong);
                CHECK(std::abs(state.w.at(id)[f] * e - 1.0) <= 1e-12);
                CHECK(state.w.at(id)[f] >= 1.0);
            }
    }
}

TEST_CASE("power update saturates the budgets of an interference-free link") {
    testing::ManualChannels mc(1, 1, 1, 1e-13);
    mc.set_direct(0, 0, {2e-4, 0.0});
    mc.set_direct(1, 0, {1e-4, 0.0});
    const auto& H = mc.channels();
    const Budgets budgets{0.025, 0.1};
    AllocationState state;
    state.strong = fixed_strong(0, 1, 1);
    state.P = uniform_initial_powers(H, budgets);
    update_g(state, H);
    update_w(state, H);
    update_p(state, H, unit_alpha(H.users), budgets, {});
    CHECK(state.P.at(0, 0) == Catch::Approx(budgets.p_u_w).epsilon(1e-9));
    CHECK(state.P.at(1, 0) == Catch::Approx(budgets.p_d_w).epsilon(1e-9));
    CHECK(state.mu_u.at(0) > 0.0);
    CHECK(state.mu_d > 0.0);
}

TEST_CASE("budgets hold after every power update") {
    for (std::uint64_t seed : {2ull, 9ull, 40ull}) {
        const auto inst = testing::random_instance(3, 3, 6, seed);
        const auto& H = inst.channels;
        AllocationState state;
        state.strong = select_strong_users(H, inst.alpha, {});
        state.P = uniform_initial_powers(H, inst.budgets);
        for (int it = 0; it < 5; ++it) {
            update_g(state, H);
            update_w(state, H);
            update_p(state, H, inst.alpha, inst.budgets, {});
            for (UserId u : H.users.uplink) {
                CHECK(state.P.user_total(u) <= inst.budgets.p_u_w * (1.0 + 1e-9));
                if (state.mu_u.at(u) > 1e-8)
                    CHECK(std::abs(state.P.user_total(u) - inst.budgets.p_u_w) <=
                          1e-9 * inst.budgets.p_u_w);
            }
            double dl_total = 0.0;
            for (UserId d : H.users.downlink) dl_total += state.P.user_total(d);
            CHECK(dl_total <= inst.budgets.p_d_w * (1.0 + 1e-9));
            if (state.mu_d > 1e-8)
                CHECK(std::abs(dl_total - inst.budgets.p_d_w) <= 1e-9 * inst.budgets.p_d_w);
            for (const auto& [id, row] : state.P.p)
                for (double p : row) {
                    CHECK(p >= 0.0);
                    CHECK(std::isfinite(p));
                }
        }
    }
}

TEST_CASE("bisection failure raises a diagnostic error") {
    const auto inst = testing::random_instance(1, 1, 2, 6);
    SolverConfig cfg;
    cfg.bisection_max_steps = 1;
    cfg.bisection_tol = 1e-15;
    CHECK_THROWS_AS(solve(inst.channels, inst.alpha, inst.budgets, cfg), BisectionError);
}

TEST_CASE("tiny full-duplex cell solves to the grid optimum") {
    int quick = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto inst = testing::random_instance(1, 1, 1, 1000 + seed);
        SolverConfig cfg;
        cfg.sic_strategy = SicStrategy::ignore;  // no weak users exist
        const RunResult run = solve(inst.channels, inst.alpha, inst.budgets, cfg);
        REQUIRE(run.converged);
        const double oracle = grid_search_2d(inst.channels, inst.alpha, inst.budgets, 200);
        CHECK(run.objective_trace.back() >= oracle * (1.0 - 0.01));
        if (run.iterations_used <= 5) ++quick;
    }
    CHECK(quick >= 5);  // typically converges in a handful of iterations
}

TEST_CASE("two-carrier single-user allocation matches water-filling") {
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        const auto mc = decoupled_instance(2, seed);
        const auto& H = mc.channels();
        const Budgets budgets{0.025, 0.1};
        SolverConfig cfg;
        cfg.objective_rel_tol = 1e-15;
        cfg.max_iterations = 20000;
        const RunResult run = solve(H, unit_alpha(H.users), budgets, cfg);
        REQUIRE(run.converged);
        const double sigma = H.noise_power_w;
        const auto [u1, u2] = waterfill_two_channels(sigma / H.gain2(0, 0, 0),
                                                     sigma / H.gain2(0, 0, 1), budgets.p_u_w);
        const auto [d1, d2] = waterfill_two_channels(sigma / H.gain2(1, 1, 0),
                                                     sigma / H.gain2(1, 1, 1), budgets.p_d_w);
        const double scale_u = budgets.p_u_w, scale_d = budgets.p_d_w;
        CHECK(std::abs(run.final_state.P.at(0, 0) - u1) <= 1e-6 * scale_u);
        CHECK(std::abs(run.final_state.P.at(0, 1) - u2) <= 1e-6 * scale_u);
        CHECK(std::abs(run.final_state.P.at(1, 0) - d1) <= 1e-6 * scale_d);
        CHECK(std::abs(run.final_state.P.at(1, 1) - d2) <= 1e-6 * scale_d);
    }
}

TEST_CASE("objective ascends monotonically without SIC handling") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto inst = testing::random_instance(3, 3, 6, 2000 + seed);
        SolverConfig cfg;
        cfg.sic_strategy = SicStrategy::ignore;
        const RunResult run = solve(inst.channels, inst.alpha, inst.budgets, cfg);
        for (std::size_t i = 1; i < run.objective_trace.size(); ++i)
            CHECK(run.objective_trace[i] >= run.objective_trace[i - 1] - 1e-9);
    }
}

TEST_CASE("converged state is a fixed point of the g and w updates") {
    const auto inst = testing::random_instance(3, 3, 6, 321);
    const RunResult run = solve(inst.channels, inst.alpha, inst.budgets, {});
    REQUIRE(run.converged);
    AllocationState state = run.final_state;
    update_g(state, inst.channels);
    update_w(state, inst.channels);
    for (UserId id : inst.channels.users.all())
        for (int f = 0; f < 6; ++f) {
            CHECK(state.g.at(id)[f] == run.final_state.g.at(id)[f]);
            CHECK(state.w.at(id)[f] == run.final_state.w.at(id)[f]);
        }
}

TEST_CASE("final allocations satisfy the budgets and complementary slackness") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto inst = testing::random_instance(3, 3, 6, 3000 + seed);
        const RunResult run = solve(inst.channels, inst.alpha, inst.budgets, {});
        const auto& state = run.final_state;
        for (UserId u : inst.channels.users.uplink) {
            CHECK(state.P.user_total(u) <= inst.budgets.p_u_w * (1.0 + 1e-9));
            if (state.mu_u.at(u) > 1e-8)
                CHECK(std::abs(state.P.user_total(u) - inst.budgets.p_u_w) <=
                      1e-6 * inst.budgets.p_u_w);
        }
        double dl_total = 0.0;
        for (UserId d : inst.channels.users.downlink) dl_total += state.P.user_total(d);
        CHECK(dl_total <= inst.budgets.p_d_w * (1.0 + 1e-9));
        if (state.mu_d > 1e-8)
            CHECK(std::abs(dl_total - inst.budgets.p_d_w) <= 1e-6 * inst.budgets.p_d_w);
    }
}

TEST_CASE("scaling all fairness weights leaves the allocation unchanged") {
    const auto inst = testing::random_instance(3, 3, 6, 17);
    FairnessWeights scaled;
    for (const auto& [id, a] : inst.alpha.alpha) scaled.alpha[id] = 3.7 * a;
    SolverConfig cfg;
    cfg.sic_strategy = SicStrategy::ignore;
    const RunResult a = solve(inst.channels, inst.alpha, inst.budgets, cfg);
    const RunResult b = solve(inst.channels, scaled, inst.budgets, cfg);
    REQUIRE(a.iterations_used == b.iterations_used);
    for (UserId id : inst.channels.users.all())
        for (int f = 0; f < 6; ++f) {
            const double pa = a.final_state.P.at(id, f);
            const double pb = b.final_state.P.at(id, f);
            CHECK(std::abs(pa - pb) <= 1e-6 * std::max({pa, pb, 1e-12}));
        }
}

TEST_CASE("SIC enforcement") {
    SECTION("vacuous when no weak user transmits") {
        const auto inst = testing::random_instance(2, 1, 2, 44);  // one downlink user only
        SolverConfig cfg;
        const RunResult run = solve(inst.channels, inst.alpha, inst.budgets, cfg);
        AllocationState state = run.final_state;
        CHECK(enforce_sic(state, inst.channels, cfg, 1) == 0);
        CHECK(run.sic_rounds_used == 1);
    }
    SECTION("repair zeroes a violating weak user's power") {
        // Force the weaker-channel user to act as strong so the margin for
        // the better-channel weak user is negative.
        testing::ManualChannels mc(1, 2, 1, 1e-13);
        mc.set_direct(0, 0, {1e-4, 0.0});
        mc.set_direct(1, 0, {1e-5, 0.0});   // forced "strong", poor channel
        mc.set_direct(2, 0, {5e-4, 0.0});   // weak with the better channel
        mc.set_cross(0, 1, 0, {1e-6, 0.0});
        mc.set_cross(0, 2, 0, {1e-6, 0.0});
        mc.set_self_interference(0, {1e-9, 0.0});
        const auto& H = mc.channels();
        const Budgets budgets{0.025, 0.1};
        SolverConfig cfg;
        cfg.sic_strategy = SicStrategy::repair;
        AllocationState state;
        state.strong = fixed_strong(0, 1, 1);
        state.P = uniform_initial_powers(H, budgets);
        REQUIRE(gamma_sic(2, 1, 0, state.P, H) < 0.0);
        CHECK(enforce_sic(state, H, cfg, 1) == 1);
        CHECK(state.P.at(2, 0) == 0.0);
        // second call finds nothing active to repair
        CHECK(enforce_sic(state, H, cfg, 2) == 0);
    }
    SECTION("subgradient multipliers stay zero on a feasible run") {
        const auto inst = testing::random_instance(3, 3, 6, 202);
        SolverConfig ignore_cfg;
        ignore_cfg.sic_strategy = SicStrategy::ignore;
        const RunResult base = solve(inst.channels, inst.alpha, inst.budgets, ignore_cfg);
        bool feasible = true;
        for (const auto& [key, gamma] : base.sic_residuals) feasible &= gamma >= 0.0;
        if (feasible) {
            SolverConfig sub_cfg;
            sub_cfg.sic_strategy = SicStrategy::subgradient;
            const RunResult run = solve(inst.channels, inst.alpha, inst.budgets, sub_cfg);
            for (const auto& [key, mu] : run.final_state.mu_sic) CHECK(mu == 0.0);
        }
    }
    SECTION("repair leaves every surviving pair feasible") {
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            const auto inst = testing::random_instance(3, 3, 6, 4000 + seed);
            SolverConfig cfg;  // repair is the default strategy
            const RunResult run = solve(inst.channels, inst.alpha, inst.budgets, cfg);
            for (const auto& [key, gamma] : run.sic_residuals) CHECK(gamma >= 0.0);
        }
    }
}

TEST_CASE("weak-user sparsity counting") {
    const auto inst = testing::random_instance(3, 3, 6, 55);
    const RunResult run = solve(inst.channels, inst.alpha, inst.budgets, {});
    SECTION("threshold above every power zeroes the counts") {
        const auto counts = weak_user_sparsity(run, inst.channels.users, 1.0);
        for (const auto& [key, count] : counts) CHECK(count == 0);
    }
    SECTION("zero-power state has no active weak users") {
        RunResult empty = run;
        empty.final_state.P = PowerVector::zeros(inst.channels.users, 6);
        const auto counts = weak_user_sparsity(empty, inst.channels.users, 1e-10);
        for (const auto& [key, count] : counts) CHECK(count == 0);
    }
    SECTION("counts never include the strong user") {
        const auto counts = weak_user_sparsity(run, inst.channels.users, 1e-10);
        for (const auto& [key, count] : counts) {
            CHECK(count >= 0);
            const int others = (key.first == Direction::uplink
                                    ? static_cast<int>(inst.channels.users.uplink.size())
                                    : static_cast<int>(inst.channels.users.downlink.size())) -
                               1;
            CHECK(count <= others);
        }
    }
}

TEST_CASE("forced strong maps reject foreign users") {
    const auto inst = testing::random_instance(2, 2, 2, 66);
    StrongUserMap bad = fixed_strong(inst.channels.users.downlink.front(),
                                     inst.channels.users.uplink.front(), 2);
    CHECK_THROWS_AS(solve_given_strong(inst.channels, inst.alpha, inst.budgets, bad),
                    std::invalid_argument);
}
