# SPDX-License-Identifier: Apache-2.0
"""WMMSE power allocation for multicarrier NOMA full-duplex cells.

Thin wrapper around the C++ core. Rates returned by result objects are in
nats; use :func:`nats_to_bits` (or the ``*_bpshz`` fields of the JSON forms)
for bits/s/Hz.
"""

import json as _json

from ._core import (  # noqa: F401
    Algorithm,
    AllocationState,
    BaselineResult,
    Budgets,
    ChannelSet,
    Direction,
    FairnessWeights,
    PowerVector,
    RunResult,
    Scenario,
    ScenarioConfig,
    SicStrategy,
    SolverConfig,
    StrongSelector,
    StrongUserMap,
    SweepCell,
    SweepResult,
    SweepSpec,
    SweptParameter,
    UserSets,
    dbm_to_watts,
    fairness_weights,
    generate_channels,
    generate_scenario,
    grid_oracle,
    nats_to_bits,
    oma_fd_greedy,
    oma_hd_waterfill,
    run_sweep,
    select_strong_users,
    solve,
    watts_to_dbm,
)


def scenario_config(**kwargs) -> ScenarioConfig:
    """Build a ScenarioConfig from keyword overrides of the defaults."""
    cfg = ScenarioConfig()
    for key, value in kwargs.items():
        if not hasattr(cfg, key):
            raise TypeError(f"unknown scenario parameter {key!r}")
        setattr(cfg, key, value)
    return cfg


def solve_scenario(seed: int = 1, solver: SolverConfig | None = None, **scenario_kwargs):
    """Generate a scenario, its channels, and run one WMMSE solve."""
    scn = generate_scenario(scenario_config(**scenario_kwargs), seed)
    channels = generate_channels(scn)
    alpha = fairness_weights(scn)
    return solve(channels, alpha, Budgets.from_scenario(scn), solver or SolverConfig())


def to_dict(obj) -> dict:
    """JSON-schema view of a result or scenario object."""
    return _json.loads(obj.to_json_str())
