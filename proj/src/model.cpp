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

#include "nomafd/model.hpp"

#include <cmath>

namespace nomafd {

std::vector<UserId> interference_set(UserId i, int f, const StrongUserMap& strong,
                                     const UserSets& users) {
    const Direction dir = users.direction_of(i);
    std::vector<UserId> out;
    out.reserve(users.size());
    if (dir == Direction::uplink) {
        const UserId strong_ul = strong.at(Direction::uplink, f);
        if (i == strong_ul) {
            for (UserId j : users.uplink)
                if (j != i) out.push_back(j);
            for (UserId j : users.downlink) out.push_back(j);
        } else {
            for (UserId j : users.uplink)
                if (j != i && j != strong_ul) out.push_back(j);
            for (UserId j : users.downlink) out.push_back(j);
        }
    } else {
        if (i == strong.at(Direction::downlink, f)) {
            out = users.uplink;
        } else {
            for (UserId j : users.uplink) out.push_back(j);
            for (UserId j : users.downlink)
                if (j != i) out.push_back(j);
        }
    }
    return out;
}

std::vector<UserId> cochannel_set(UserId i, int f, const StrongUserMap& strong,
                                  const UserSets& users) {
    const Direction dir = users.direction_of(i);
    std::vector<UserId> out;
    out.reserve(users.size());
    if (dir == Direction::uplink) {
        if (i == strong.at(Direction::uplink, f)) {
            out = users.downlink;
        } else {
            for (UserId j : users.uplink)
                if (j != i) out.push_back(j);
            for (UserId j : users.downlink) out.push_back(j);
        }
    } else {
        const UserId strong_dl = strong.at(Direction::downlink, f);
        if (i == strong_dl) {
            for (UserId j : users.uplink) out.push_back(j);
            for (UserId j : users.downlink)
                if (j != i) out.push_back(j);
        } else {
            for (UserId j : users.uplink) out.push_back(j);
            for (UserId j : users.downlink)
                if (j != i && j != strong_dl) out.push_back(j);
        }
    }
    return out;
}

double sinr(UserId i, int f, const PowerVector& P, const ChannelSet& H,
            const StrongUserMap& strong) {
    const double p_own = P.at(i, f);
    if (p_own <= 0.0) return 0.0;
    double denom = H.noise_power_w;
    for (UserId j : interference_set(i, f, strong, H.users))
        denom += H.gain2(j, i, f) * P.at(j, f);
    return H.gain2(i, i, f) * p_own / denom;
}

double weighted_sum_rate(const PowerVector& P, const ChannelSet& H, const StrongUserMap& strong,
                         const FairnessWeights& alpha) {
    double total = 0.0;
    for (int f = 0; f < H.num_subcarriers; ++f)
        for (UserId i : H.users.all()) total += alpha.at(i) * rate(sinr(i, f, P, H, strong));
    return total;
}

double gamma_sic(UserId k, UserId i, int f, const PowerVector& P, const ChannelSet& H) {
    if (k == i) throw std::invalid_argument("gamma_sic requires two distinct downlink users");
    if (!H.users.is_downlink(k) || !H.users.is_downlink(i))
        throw std::invalid_argument("gamma_sic arguments must be downlink users");
    const double g_ii = H.gain2(i, i, f);
    const double g_kk = H.gain2(k, k, f);
    double value = H.noise_power_w * (g_ii - g_kk);
    for (UserId j : H.users.uplink)
        value += (g_ii * H.gain2(j, k, f) - g_kk * H.gain2(j, i, f)) * P.at(j, f);
    return value;
}

double mse(UserId i, int f, Complex g, const PowerVector& P, const ChannelSet& H,
           const StrongUserMap& strong) {
    const Complex h_ii = H.gain(i, i, f);
    double value = std::norm(1.0 - g * h_ii * std::sqrt(P.at(i, f)));
    for (UserId j : interference_set(i, f, strong, H.users))
        value += std::norm(g * H.gain(j, i, f)) * P.at(j, f);
    value += std::norm(g) * H.noise_power_w;
    return value;
}

Complex mmse_scaling(UserId i, int f, const PowerVector& P, const ChannelSet& H,
                     const StrongUserMap& strong) {
    const double p_own = P.at(i, f);
    if (p_own <= 0.0) return {0.0, 0.0};
    double denom = H.gain2(i, i, f) * p_own + H.noise_power_w;
    for (UserId j : interference_set(i, f, strong, H.users))
        denom += H.gain2(j, i, f) * P.at(j, f);
    return std::conj(H.gain(i, i, f)) * std::sqrt(p_own) / denom;
}

}  // namespace nomafd
