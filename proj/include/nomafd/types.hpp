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

#ifndef NOMAFD_TYPES_HPP
#define NOMAFD_TYPES_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace nomafd {

using UserId = std::uint32_t;
using Complex = std::complex<double>;

enum class Direction { uplink, downlink };

inline const char* to_string(Direction d) {
    return d == Direction::uplink ? "uplink" : "downlink";
}

// dB / dBm conversions. All internal arithmetic is in watts; dB values only
// cross the boundary here.
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }
inline double dbm_to_watts(double dbm) { return 1e-3 * db_to_linear(dbm); }
inline double watts_to_dbm(double watts) { return linear_to_db(watts * 1e3); }

// Rates are kept in nats internally; external surfaces report bits.
inline double nats_to_bits(double nats) { return nats / std::numbers::ln2; }

struct Position {
    double x = 0.0;
    double y = 0.0;

    double norm() const { return std::hypot(x, y); }
};

inline double distance(const Position& a, const Position& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

// Ordered uplink/downlink user id sets. Ids are opaque; all quantities keyed
// by them are relabeling-equivariant.
struct UserSets {
    std::vector<UserId> uplink;
    std::vector<UserId> downlink;

    bool is_uplink(UserId id) const {
        return std::find(uplink.begin(), uplink.end(), id) != uplink.end();
    }
    bool is_downlink(UserId id) const {
        return std::find(downlink.begin(), downlink.end(), id) != downlink.end();
    }
    Direction direction_of(UserId id) const {
        if (is_uplink(id)) return Direction::uplink;
        if (is_downlink(id)) return Direction::downlink;
        throw std::invalid_argument("unknown user id " + std::to_string(id));
    }
    std::vector<UserId> all() const {
        std::vector<UserId> out(uplink);
        out.insert(out.end(), downlink.begin(), downlink.end());
        return out;
    }
    std::size_t size() const { return uplink.size() + downlink.size(); }
};

// Parameters from which a concrete user drop is generated.
struct ScenarioConfig {
    double cell_radius_m = 100.0;
    double min_distance_m = 30.0;
    int num_subcarriers = 6;
    int num_uplink_users = 3;
    int num_downlink_users = 3;
    double path_loss_exponent = 4.0;
    double shadowing_sigma_db = 8.0;
    double si_cancellation_db = 110.0;
    double noise_power_dbm = -70.0;
    double p_u_dbm = 14.0;  // per-uplink-user budget
    double p_d_dbm = 20.0;  // total downlink budget

    void validate() const;
};

// A concrete single-cell drop: user positions plus all physical parameters.
// The base station sits at the origin.
struct Scenario {
    double cell_radius_m = 100.0;
    double min_distance_m = 30.0;
    int num_subcarriers = 6;
    UserSets users;
    std::map<UserId, Position> user_positions;
    double path_loss_exponent = 4.0;
    double shadowing_sigma_db = 8.0;
    double si_cancellation_db = 110.0;
    double noise_power_dbm = -70.0;
    double p_u_dbm = 14.0;
    double p_d_dbm = 20.0;
    std::uint64_t rng_seed = 0;

    double distance_to_bs(UserId id) const { return user_positions.at(id).norm(); }
    double noise_power_w() const { return dbm_to_watts(noise_power_dbm); }
    void validate() const;
};

// Transmit power budgets in watts.
struct Budgets {
    double p_u_w = 0.0;  // per uplink user
    double p_d_w = 0.0;  // pooled over all downlink users

    static Budgets from_scenario(const Scenario& s) {
        return {dbm_to_watts(s.p_u_dbm), dbm_to_watts(s.p_d_dbm)};
    }
};

// Complex gains h_{j,i}(f) for every (transmitter j, receiver i) pair the
// interference bookkeeping can ask for. Entries with j,i in the same
// direction alias the direct user<->BS link of that direction; downlink->
// uplink entries alias the residual BS self-interference channel.
struct ChannelSet {
    UserSets users;
    int num_subcarriers = 0;
    double noise_power_w = 0.0;
    std::map<std::pair<UserId, UserId>, std::vector<Complex>> gains;

    const Complex& gain(UserId tx, UserId rx, int f) const {
        auto it = gains.find({tx, rx});
        if (it == gains.end())
            throw std::invalid_argument("no channel entry for pair (" + std::to_string(tx) +
                                        "," + std::to_string(rx) + ")");
        return it->second.at(static_cast<std::size_t>(f));
    }
    double gain2(UserId tx, UserId rx, int f) const { return std::norm(gain(tx, rx, f)); }
};

// Fairness weights alpha_i = (d_i / max_j d_j)^2.
struct FairnessWeights {
    std::map<UserId, double> alpha;

    double at(UserId id) const { return alpha.at(id); }
};

// Transmit powers in watts, one entry per (user, subcarrier).
struct PowerVector {
    std::map<UserId, std::vector<double>> p;

    static PowerVector zeros(const UserSets& users, int num_subcarriers) {
        PowerVector out;
        for (UserId id : users.all())
            out.p[id].assign(static_cast<std::size_t>(num_subcarriers), 0.0);
        return out;
    }

    double at(UserId id, int f) const { return p.at(id).at(static_cast<std::size_t>(f)); }
    double& at(UserId id, int f) { return p.at(id).at(static_cast<std::size_t>(f)); }

    double user_total(UserId id) const {
        const auto& row = p.at(id);
        double s = 0.0;
        for (double v : row) s += v;
        return s;
    }
};

// Per-subcarrier strong user of each direction (the x^(s) flags).
struct StrongUserMap {
    std::vector<UserId> uplink;    // indexed by subcarrier
    std::vector<UserId> downlink;  // indexed by subcarrier

    UserId at(Direction d, int f) const {
        const auto& v = d == Direction::uplink ? uplink : downlink;
        return v.at(static_cast<std::size_t>(f));
    }
    bool is_strong(UserId id, Direction d, int f) const { return at(d, f) == id; }
    int num_subcarriers() const { return static_cast<int>(uplink.size()); }
};

}  // namespace nomafd

#endif
