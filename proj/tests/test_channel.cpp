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
#include "nomafd/channel.hpp"

using namespace nomafd;

namespace {

Scenario two_user_scenario(double d_uplink, double d_downlink, double shadowing_db = 0.0) {
    Scenario s;
    s.cell_radius_m = 150.0;
    s.min_distance_m = 1.0;
    s.num_subcarriers = 4;
    s.users.uplink = {0};
    s.users.downlink = {1};
    s.user_positions[0] = {d_uplink, 0.0};
    s.user_positions[1] = {0.0, d_downlink};
    s.shadowing_sigma_db = shadowing_db;
    s.rng_seed = 7;
    return s;
}

}  // namespace

TEST_CASE("generate_scenario keeps users inside the annulus") {
    ScenarioConfig cfg;  // defaults: R=100, min=30, M=N=3, F=6
    const Scenario s = generate_scenario(cfg, 42);
    REQUIRE(s.users.size() == 6);
    for (UserId id : s.users.all()) {
        const double d = s.distance_to_bs(id);
        CHECK(d >= 30.0);
        CHECK(d <= 100.0);
    }
    // and over a batch of seeds
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const Scenario t = generate_scenario(cfg, seed);
        for (UserId id : t.users.all()) {
            CHECK(t.distance_to_bs(id) >= cfg.min_distance_m);
            CHECK(t.distance_to_bs(id) <= cfg.cell_radius_m);
        }
    }
}

TEST_CASE("generate_scenario is deterministic in (config, seed)") {
    ScenarioConfig cfg;
    cfg.num_uplink_users = 1;
    cfg.num_downlink_users = 1;
    cfg.num_subcarriers = 1;
    const Scenario a = generate_scenario(cfg, 0);
    const Scenario b = generate_scenario(cfg, 0);
    REQUIRE(a.users.size() == 2);
    for (UserId id : a.users.all()) {
        CHECK(a.user_positions.at(id).x == b.user_positions.at(id).x);
        CHECK(a.user_positions.at(id).y == b.user_positions.at(id).y);
    }
}

TEST_CASE("generate_scenario is seed sensitive") {
    ScenarioConfig cfg;
    const Scenario a = generate_scenario(cfg, 1);
    const Scenario b = generate_scenario(cfg, 2);
    bool any_different = false;
    for (UserId id : a.users.all())
        any_different |= a.user_positions.at(id).x != b.user_positions.at(id).x;
    CHECK(any_different);
}

TEST_CASE("generate_scenario rejects invalid configurations") {
    ScenarioConfig cfg;
    cfg.min_distance_m = 100.0;  // == radius
    CHECK_THROWS_AS(generate_scenario(cfg, 1), std::invalid_argument);
    cfg = ScenarioConfig{};
    cfg.num_uplink_users = 0;
    CHECK_THROWS_AS(generate_scenario(cfg, 1), std::invalid_argument);
    cfg = ScenarioConfig{};
    cfg.num_downlink_users = 0;
    CHECK_THROWS_AS(generate_scenario(cfg, 1), std::invalid_argument);
    cfg = ScenarioConfig{};
    cfg.num_subcarriers = 0;
    CHECK_THROWS_AS(generate_scenario(cfg, 1), std::invalid_argument);
}

TEST_CASE("self-interference entries carry exactly the cancellation factor") {
    Scenario s = two_user_scenario(60.0, 80.0, 8.0);
    s.si_cancellation_db = 110.0;
    Scenario raw = s;
    raw.si_cancellation_db = 0.0;

    const ChannelSet with_si = generate_channels(s);
    const ChannelSet without = generate_channels(raw);
    for (int f = 0; f < s.num_subcarriers; ++f) {
        const double ratio = with_si.gain2(1, 0, f) / without.gain2(1, 0, f);
        CHECK(ratio == Catch::Approx(1e-11).epsilon(1e-12));
    }
}

TEST_CASE("large-scale attenuation follows the path-loss exponent") {
    // Same link seed, no shadowing: moving a user from 50 m to 100 m scales
    // |h|^2 by (50/100)^4 = 1/16.
    const ChannelSet near = generate_channels(two_user_scenario(50.0, 80.0));
    const ChannelSet far = generate_channels(two_user_scenario(100.0, 80.0));
    for (int f = 0; f < 4; ++f)
        CHECK(far.gain2(0, 0, f) / near.gain2(0, 0, f) == Catch::Approx(1.0 / 16.0).epsilon(1e-12));
}

TEST_CASE("unit-distance fading has unit variance") {
    Scenario s;
    s.cell_radius_m = 2.0;
    s.min_distance_m = 0.5;
    s.num_subcarriers = 10000;
    s.users.uplink = {0};
    s.users.downlink = {1};
    s.user_positions[0] = {1.0, 0.0};
    s.user_positions[1] = {0.0, 1.0};
    s.shadowing_sigma_db = 0.0;
    s.rng_seed = 3;
    const ChannelSet H = generate_channels(s);
    double mean_power = 0.0;
    for (int f = 0; f < s.num_subcarriers; ++f) mean_power += H.gain2(0, 0, f);
    mean_power /= s.num_subcarriers;
    CHECK(mean_power == Catch::Approx(1.0).margin(0.05));
}

TEST_CASE("channel generation is deterministic") {
    const auto inst = testing::random_instance(3, 3, 6, 99);
    const ChannelSet again = generate_channels(inst.scenario);
    REQUIRE(again.gains.size() == inst.channels.gains.size());
    for (const auto& [key, row] : inst.channels.gains) {
        const auto& other = again.gains.at(key);
        for (std::size_t f = 0; f < row.size(); ++f) {
            CHECK(row[f].real() == other[f].real());
            CHECK(row[f].imag() == other[f].imag());
        }
    }
}

TEST_CASE("all generated gains are positive and finite") {
    for (std::uint64_t seed : {1ull, 17ull, 23ull}) {
        const auto inst = testing::random_instance(3, 3, 6, seed);
        for (const auto& [key, row] : inst.channels.gains)
            for (const Complex& h : row) {
                CHECK(std::isfinite(h.real()));
                CHECK(std::isfinite(h.imag()));
                CHECK(std::norm(h) > 0.0);
            }
    }
}

TEST_CASE("fairness weights follow the squared distance ratio") {
    const Scenario s = two_user_scenario(50.0, 100.0);
    const FairnessWeights w = fairness_weights(s);
    CHECK(w.at(0) == Catch::Approx(0.25).epsilon(1e-12));
    CHECK(w.at(1) == Catch::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("equidistant users all get weight one") {
    Scenario s = two_user_scenario(80.0, 80.0);
    const FairnessWeights w = fairness_weights(s);
    CHECK(w.at(0) == Catch::Approx(1.0).epsilon(1e-12));
    CHECK(w.at(1) == Catch::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("fairness weights match recomputation from stored positions") {
    const auto inst = testing::random_instance(3, 3, 6, 5);
    const FairnessWeights w = fairness_weights(inst.scenario);
    double dmax = 0.0;
    for (UserId id : inst.scenario.users.all())
        dmax = std::max(dmax, inst.scenario.distance_to_bs(id));
    double max_alpha = 0.0;
    for (UserId id : inst.scenario.users.all()) {
        const double expected = std::pow(inst.scenario.distance_to_bs(id) / dmax, 2.0);
        CHECK(w.at(id) == Catch::Approx(expected).epsilon(1e-12));
        max_alpha = std::max(max_alpha, w.at(id));
    }
    CHECK(max_alpha == Catch::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("weight ordering matches distance ordering") {
    const auto inst = testing::random_instance(4, 4, 2, 11);
    const FairnessWeights w = fairness_weights(inst.scenario);
    const auto ids = inst.scenario.users.all();
    for (UserId a : ids)
        for (UserId b : ids)
            if (inst.scenario.distance_to_bs(a) < inst.scenario.distance_to_bs(b))
                CHECK(w.at(a) < w.at(b));
}
