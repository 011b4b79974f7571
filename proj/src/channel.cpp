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

#include "nomafd/channel.hpp"

#include <cmath>

#include "nomafd/rng.hpp"

namespace nomafd {

namespace {

// Sub-seed domain tags.
constexpr std::uint64_t kTagPositions = 0x01;
constexpr std::uint64_t kTagLink = 0x02;
constexpr std::uint64_t kTagSelfInterference = 0x03;

// Pairwise distances are clamped to the 1 m reference distance of the
// path-loss model so gains never exceed unity.
constexpr double kReferenceDistanceM = 1.0;

void check_finite_db(double v, const char* name) {
    if (!std::isfinite(v)) throw std::invalid_argument(std::string(name) + " must be finite");
}

// Rayleigh-faded link with log-normal shadowing, one shadowing draw shared
// across subcarriers.
std::vector<Complex> draw_link(std::uint64_t seed, double distance_m, double path_loss_exponent,
                               double shadowing_sigma_db, int num_subcarriers) {
    Rng rng(seed);
    const double shadow_db = shadowing_sigma_db * rng.normal();
    const double d = std::max(distance_m, kReferenceDistanceM);
    const double large_scale = std::pow(d, -path_loss_exponent) * db_to_linear(shadow_db);
    const double amp = std::sqrt(large_scale);
    std::vector<Complex> h(static_cast<std::size_t>(num_subcarriers));
    for (auto& v : h) v = amp * rng.complex_normal();
    return h;
}

}  // namespace

void ScenarioConfig::validate() const {
    if (min_distance_m >= cell_radius_m)
        throw std::invalid_argument("min_distance_m must be smaller than cell_radius_m");
    if (min_distance_m < 0.0) throw std::invalid_argument("min_distance_m must be nonnegative");
    if (num_uplink_users < 1 || num_downlink_users < 1)
        throw std::invalid_argument("need at least one user per direction");
    if (num_subcarriers < 1) throw std::invalid_argument("need at least one subcarrier");
    if (path_loss_exponent <= 0.0)
        throw std::invalid_argument("path_loss_exponent must be positive");
    if (shadowing_sigma_db < 0.0)
        throw std::invalid_argument("shadowing_sigma_db must be nonnegative");
    check_finite_db(shadowing_sigma_db, "shadowing_sigma_db");
    check_finite_db(si_cancellation_db, "si_cancellation_db");
    check_finite_db(noise_power_dbm, "noise_power_dbm");
    check_finite_db(p_u_dbm, "p_u_dbm");
    check_finite_db(p_d_dbm, "p_d_dbm");
}

void Scenario::validate() const {
    if (min_distance_m >= cell_radius_m)
        throw std::invalid_argument("min_distance_m must be smaller than cell_radius_m");
    if (users.uplink.empty() || users.downlink.empty())
        throw std::invalid_argument("need at least one user per direction");
    if (num_subcarriers < 1) throw std::invalid_argument("need at least one subcarrier");
    if (path_loss_exponent <= 0.0)
        throw std::invalid_argument("path_loss_exponent must be positive");
    for (UserId u : users.uplink)
        if (users.is_downlink(u))
            throw std::invalid_argument("user " + std::to_string(u) + " in both directions");
    for (UserId id : users.all()) {
        auto it = user_positions.find(id);
        if (it == user_positions.end())
            throw std::invalid_argument("missing position for user " + std::to_string(id));
        const double d = it->second.norm();
        const double slack = 1e-9 * cell_radius_m;
        if (d < min_distance_m - slack || d > cell_radius_m + slack)
            throw std::invalid_argument("user " + std::to_string(id) + " outside the annulus");
    }
    check_finite_db(shadowing_sigma_db, "shadowing_sigma_db");
    check_finite_db(si_cancellation_db, "si_cancellation_db");
    check_finite_db(noise_power_dbm, "noise_power_dbm");
    check_finite_db(p_u_dbm, "p_u_dbm");
    check_finite_db(p_d_dbm, "p_d_dbm");
}

Scenario generate_scenario(const ScenarioConfig& config, std::uint64_t seed) {
    config.validate();

    Scenario s;
    s.cell_radius_m = config.cell_radius_m;
    s.min_distance_m = config.min_distance_m;
    s.num_subcarriers = config.num_subcarriers;
    s.path_loss_exponent = config.path_loss_exponent;
    s.shadowing_sigma_db = config.shadowing_sigma_db;
    s.si_cancellation_db = config.si_cancellation_db;
    s.noise_power_dbm = config.noise_power_dbm;
    s.p_u_dbm = config.p_u_dbm;
    s.p_d_dbm = config.p_d_dbm;
    s.rng_seed = seed;

    UserId next = 0;
    for (int i = 0; i < config.num_uplink_users; ++i) s.users.uplink.push_back(next++);
    for (int i = 0; i < config.num_downlink_users; ++i) s.users.downlink.push_back(next++);

    // Uniform over the annulus area: r = sqrt(r_min^2 + u (R^2 - r_min^2)).
    Rng rng(hash_seed({seed, kTagPositions}));
    const double r2min = config.min_distance_m * config.min_distance_m;
    const double r2max = config.cell_radius_m * config.cell_radius_m;
    for (UserId id : s.users.all()) {
        const double r = std::sqrt(r2min + rng.uniform01() * (r2max - r2min));
        const double theta = 2.0 * std::numbers::pi * rng.uniform01();
        s.user_positions[id] = {r * std::cos(theta), r * std::sin(theta)};
    }
    return s;
}

ChannelSet generate_channels(const Scenario& s) {
    s.validate();

    ChannelSet ch;
    ch.users = s.users;
    ch.num_subcarriers = s.num_subcarriers;
    ch.noise_power_w = s.noise_power_w();

    // Direct user<->BS links, one per user.
    std::map<UserId, std::vector<Complex>> direct;
    for (UserId id : s.users.all())
        direct[id] = draw_link(hash_seed({s.rng_seed, kTagLink, id, id}), s.distance_to_bs(id),
                               s.path_loss_exponent, s.shadowing_sigma_db, s.num_subcarriers);

    // Residual BS self-interference: one physical BS->BS channel per
    // subcarrier, fading only, scaled by the cancellation factor.
    std::vector<Complex> self_interference;
    {
        Rng rng(hash_seed({s.rng_seed, kTagSelfInterference}));
        const double amp = std::sqrt(db_to_linear(-s.si_cancellation_db));
        self_interference.resize(static_cast<std::size_t>(s.num_subcarriers));
        for (auto& v : self_interference) v = amp * rng.complex_normal();
    }

    for (UserId u : s.users.uplink) {
        // An uplink signal is received at the BS: every uplink receiver
        // shares user u's direct link.
        for (UserId rx : s.users.uplink) ch.gains[{u, rx}] = direct[u];
        // Uplink-to-downlink cross channels, one independent link per pair.
        for (UserId d : s.users.downlink) {
            const double dist = distance(s.user_positions.at(u), s.user_positions.at(d));
            ch.gains[{u, d}] = draw_link(hash_seed({s.rng_seed, kTagLink, u, d}), dist,
                                         s.path_loss_exponent, s.shadowing_sigma_db,
                                         s.num_subcarriers);
        }
    }
    for (UserId d : s.users.downlink) {
        // A downlink signal leaves the BS: at downlink receiver rx it passes
        // through rx's own direct link; at the BS receiver it passes through
        // the residual self-interference channel.
        for (UserId rx : s.users.downlink) ch.gains[{d, rx}] = direct[rx];
        for (UserId rx : s.users.uplink) ch.gains[{d, rx}] = self_interference;
    }
    return ch;
}

FairnessWeights fairness_weights(const Scenario& s) {
    s.validate();
    double dmax = 0.0;
    for (UserId id : s.users.all()) dmax = std::max(dmax, s.distance_to_bs(id));
    FairnessWeights w;
    for (UserId id : s.users.all()) {
        const double ratio = s.distance_to_bs(id) / dmax;
        w.alpha[id] = ratio * ratio;
    }
    return w;
}

}  // namespace nomafd
