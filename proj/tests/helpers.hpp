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

#ifndef NOMAFD_TESTS_HELPERS_HPP
#define NOMAFD_TESTS_HELPERS_HPP

#include "nomafd/channel.hpp"
#include "nomafd/rng.hpp"
#include "nomafd/types.hpp"

namespace nomafd::testing {

// Hand-built channel set with the same per-pair aliasing structure as the
// generator: same-direction pairs share the direct link, downlink->uplink
// pairs share the self-interference channel.
class ManualChannels {
  public:
    ManualChannels(int num_uplink, int num_downlink, int num_subcarriers, double noise_w) {
        UserId next = 0;
        for (int i = 0; i < num_uplink; ++i) H_.users.uplink.push_back(next++);
        for (int i = 0; i < num_downlink; ++i) H_.users.downlink.push_back(next++);
        H_.num_subcarriers = num_subcarriers;
        H_.noise_power_w = noise_w;
        const std::vector<Complex> zero(static_cast<std::size_t>(num_subcarriers), Complex{});
        for (UserId tx : H_.users.all())
            for (UserId rx : H_.users.all()) H_.gains[{tx, rx}] = zero;
    }

    // Direct user<->BS link; propagates to every same-direction pair.
    void set_direct(UserId id, int f, Complex v) {
        if (H_.users.is_uplink(id)) {
            for (UserId rx : H_.users.uplink) H_.gains.at({id, rx})[f] = v;
        } else {
            for (UserId tx : H_.users.downlink) H_.gains.at({tx, id})[f] = v;
        }
    }

    void set_cross(UserId ul, UserId dl, int f, Complex v) { H_.gains.at({ul, dl})[f] = v; }

    void set_self_interference(int f, Complex v) {
        for (UserId tx : H_.users.downlink)
            for (UserId rx : H_.users.uplink) H_.gains.at({tx, rx})[f] = v;
    }

    const ChannelSet& channels() const { return H_; }

  private:
    ChannelSet H_;
};

struct RandomInstance {
    Scenario scenario;
    ChannelSet channels;
    FairnessWeights alpha;
    Budgets budgets;
};

// Default-geometry instance with the given sizes.
inline RandomInstance random_instance(int num_uplink, int num_downlink, int num_subcarriers,
                                      std::uint64_t seed) {
    ScenarioConfig cfg;
    cfg.num_uplink_users = num_uplink;
    cfg.num_downlink_users = num_downlink;
    cfg.num_subcarriers = num_subcarriers;
    RandomInstance inst;
    inst.scenario = generate_scenario(cfg, seed);
    inst.channels = generate_channels(inst.scenario);
    inst.alpha = fairness_weights(inst.scenario);
    inst.budgets = Budgets::from_scenario(inst.scenario);
    return inst;
}

// Random powers within the budgets.
inline PowerVector random_powers(const ChannelSet& H, const Budgets& budgets, std::uint64_t seed) {
    Rng rng(seed);
    PowerVector P = PowerVector::zeros(H.users, H.num_subcarriers);
    for (UserId u : H.users.uplink)
        for (int f = 0; f < H.num_subcarriers; ++f)
            P.at(u, f) = rng.uniform01() * budgets.p_u_w / H.num_subcarriers;
    for (UserId d : H.users.downlink)
        for (int f = 0; f < H.num_subcarriers; ++f)
            P.at(d, f) = rng.uniform01() * budgets.p_d_w /
                         (H.num_subcarriers * static_cast<double>(H.users.downlink.size()));
    return P;
}

// Random but valid strong-user flags.
inline StrongUserMap random_strong(const UserSets& users, int num_subcarriers,
                                   std::uint64_t seed) {
    Rng rng(seed);
    StrongUserMap strong;
    for (int f = 0; f < num_subcarriers; ++f) {
        strong.uplink.push_back(
            users.uplink[static_cast<std::size_t>(rng.uniform01() * users.uplink.size())]);
        strong.downlink.push_back(
            users.downlink[static_cast<std::size_t>(rng.uniform01() * users.downlink.size())]);
    }
    return strong;
}

}  // namespace nomafd::testing

#endif
