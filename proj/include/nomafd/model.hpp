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

#ifndef NOMAFD_MODEL_HPP
#define NOMAFD_MODEL_HPP

#include "nomafd/types.hpp"

namespace nomafd {

// Powers at or below this threshold count as "not transmitting" wherever a
// strict P > 0 condition appears (SIC activation, weak-user counting).
constexpr double kEpsilonActiveDefault = 1e-10;

/// Set of users whose signal interferes with user i on subcarrier f, after
/// SIC. The strong uplink user sees everyone else; weak uplink users are
/// spared the strong one (the BS cancels it first); the strong downlink user
/// sees only uplink users (it cancels all weak downlink streams); weak
/// downlink users see everyone else.
std::vector<UserId> interference_set(UserId i, int f, const StrongUserMap& strong,
                                     const UserSets& users);

/// Dual of interference_set: users that receive interference from i on f.
/// Satisfies j in cochannel_set(i) iff i in interference_set(j). A user is
/// never a member of its own set.
std::vector<UserId> cochannel_set(UserId i, int f, const StrongUserMap& strong,
                                  const UserSets& users);

/// Post-SIC SINR of user i on subcarrier f.
double sinr(UserId i, int f, const PowerVector& P, const ChannelSet& H,
            const StrongUserMap& strong);

/// Normalized achievable rate in nats: log(1 + gamma).
inline double rate(double gamma) { return std::log1p(gamma); }

/// Objective value: sum over subcarriers and users of alpha_i * rate.
double weighted_sum_rate(const PowerVector& P, const ChannelSet& H, const StrongUserMap& strong,
                         const FairnessWeights& alpha);

/// SIC feasibility margin for decoding weak downlink user k at strong
/// downlink user i on subcarrier f. Nonnegative means i can decode (and
/// cancel) k's stream at least as well as k itself. Depends on uplink powers
/// only; antisymmetric under swapping k and i.
double gamma_sic(UserId k, UserId i, int f, const PowerVector& P, const ChannelSet& H);

/// Mean square error of user i's symbol estimate under receive scaling g.
double mse(UserId i, int f, Complex g, const PowerVector& P, const ChannelSet& H,
           const StrongUserMap& strong);

/// MMSE receive scaling. The numerator carries the conjugate of the direct
/// gain so that mse(mmse_scaling(...)) * (1 + sinr(...)) == 1 holds exactly
/// for complex gains. Zero transmit power yields g = 0 (and mse = 1).
Complex mmse_scaling(UserId i, int f, const PowerVector& P, const ChannelSet& H,
                     const StrongUserMap& strong);

}  // namespace nomafd

#endif
