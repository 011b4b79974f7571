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

#ifndef NOMAFD_CHANNEL_HPP
#define NOMAFD_CHANNEL_HPP

#include <cstdint>

#include "nomafd/types.hpp"

namespace nomafd {

/// Draws user positions uniformly over the annulus
/// [min_distance_m, cell_radius_m] around the base station. Uplink users get
/// ids 0..M-1, downlink users M..M+N-1. Identical (config, seed) pairs yield
/// bit-identical scenarios.
Scenario generate_scenario(const ScenarioConfig& config, std::uint64_t seed);

/// Generates the full per-subcarrier gain map for a scenario:
/// Rayleigh fading times sqrt of the large-scale attenuation
/// d^(-xi) * 10^(S/10), with log-normal shadowing S drawn once per link and
/// shared across that link's subcarriers. The BS self-interference channel is
/// unit-variance fading scaled by the cancellation factor, with no path loss
/// or shadowing. Deterministic given the scenario (sub-seeds derive from
/// rng_seed).
ChannelSet generate_channels(const Scenario& s);

/// alpha_i = (d_i / max_j d_j)^2; the farthest user gets weight 1.
FairnessWeights fairness_weights(const Scenario& s);

}  // namespace nomafd

#endif
