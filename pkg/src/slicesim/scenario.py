"""Scenario state: clock, user placement, channel draws, per-slot rotation.

A single master seed fans out into named substreams (placement, per-user
mobility, shadowing, fading) so enabling or disabling one consumer never
shifts another's sequence.  The base station sits at the area centre;
distances are floored at one metre to keep the loss model in its close-in
regime.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .channel import sample_channel
from .config import ScenarioConfig
from .mobility import MobilityState, init_mobility, rwp_step

# substream ids; order is part of the reproducibility contract
_STREAM_PLACEMENT = 0
_STREAM_MOBILITY = 1
_STREAM_SHADOW = 2
_STREAM_FADING = 3
_STREAM_AGENT = 4
_STREAM_EPISODE = 5

MIN_DISTANCE_M = 1.0


def substream(seed: int, stream: int, *key: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(stream, *key)))


def placement_rng(seed: int) -> np.random.Generator:
    return substream(seed, _STREAM_PLACEMENT)


def mobility_rng(seed: int, user: int) -> np.random.Generator:
    return substream(seed, _STREAM_MOBILITY, user)


def shadow_rng(seed: int) -> np.random.Generator:
    return substream(seed, _STREAM_SHADOW)


def fading_rng(seed: int) -> np.random.Generator:
    return substream(seed, _STREAM_FADING)


def agent_rng(seed: int, agent: int) -> np.random.Generator:
    return substream(seed, _STREAM_AGENT, agent)


def episode_seed(seed: int, episode: int) -> int:
    return int(substream(seed, _STREAM_EPISODE, episode).integers(0, 2**63 - 1))


@dataclass
class _ScenarioRngs:
    mobility: list[np.random.Generator]
    shadow: np.random.Generator
    fading: np.random.Generator


@dataclass
class ScenarioState:
    """Mutable per-run state; ``prev_*`` fields describe the completed slot."""

    t: int
    mobility: list[MobilityState]  # flat, slice-major user order
    gains: list[np.ndarray]  # per slice, current slot
    inter_fractions: np.ndarray
    intra_fractions: list[np.ndarray]
    prev_inter_fractions: np.ndarray
    prev_intra_fractions: list[np.ndarray]
    satisfaction: np.ndarray  # per slice, current slot (once settled)
    needs_flags: np.ndarray
    spare_flags: np.ndarray
    prev_satisfaction: np.ndarray
    prev_needs_flags: np.ndarray
    prev_spare_flags: np.ndarray
    rngs: _ScenarioRngs = field(repr=False, default=None)

    def positions(self) -> np.ndarray:
        return np.array([m.position for m in self.mobility])


def _user_slices(config: ScenarioConfig) -> list[tuple[int, int]]:
    """(start, stop) index ranges of each slice in the flat user order."""
    spans = []
    start = 0
    for spec in config.slice_specs:
        spans.append((start, start + spec.num_users))
        start += spec.num_users
    return spans


def _distances(config: ScenarioConfig, mobility: list[MobilityState]) -> np.ndarray:
    centre = config.area_m / 2.0
    pos = np.array([m.position for m in mobility])
    d = np.hypot(pos[:, 0] - centre, pos[:, 1] - centre)
    return np.maximum(d, MIN_DISTANCE_M)


def _sample_gains(config: ScenarioConfig, state: ScenarioState) -> list[np.ndarray]:
    dists = _distances(config, state.mobility)
    gains = []
    for start, stop in _user_slices(config):
        g = np.empty(stop - start)
        for i, u in enumerate(range(start, stop)):
            g[i] = sample_channel(
                dists[u],
                config.carrier_freq_ghz,
                state.rngs.shadow,
                state.rngs.fading,
                config.shadow_std_db,
            ).gain
        gains.append(g)
    return gains


def initial_fractions(config: ScenarioConfig) -> tuple[np.ndarray, list[np.ndarray]]:
    """Equal split at both stages, clamped into the respective bounds."""
    lo, hi = config.global_fraction_bounds
    inter = np.full(config.num_slices, np.clip(1.0 / config.num_slices, lo, hi))
    intra = []
    for spec in config.slice_specs:
        slo, shi = spec.user_fraction_bounds
        intra.append(np.full(spec.num_users, np.clip(1.0 / spec.num_users, slo, shi)))
    return inter, intra


def init_scenario(config: ScenarioConfig, seed: int) -> ScenarioState:
    """State at t = 0: users placed and moving, initial equal allocations.

    The needs flags start raised so the first slot always runs an
    inter-slice reallocation; satisfaction history starts at zero.
    """
    config.validate()
    place = placement_rng(seed)
    rngs = _ScenarioRngs(
        mobility=[mobility_rng(seed, u) for u in range(config.num_users)],
        shadow=shadow_rng(seed),
        fading=fading_rng(seed),
    )
    mobility = []
    for u in range(config.num_users):
        m = init_mobility(rngs.mobility[u], config.area_m, config.speed_bounds_m_s)
        # placement stream owns the start position; the mobility stream owns the walk
        mobility.append(
            MobilityState(
                position=place.uniform(0.0, config.area_m, size=2),
                waypoint=m.waypoint,
                speed_m_s=m.speed_m_s,
                pause_remaining_s=0.0,
            )
        )
    inter, intra = initial_fractions(config)
    n = config.num_slices
    state = ScenarioState(
        t=0,
        mobility=mobility,
        gains=[],
        inter_fractions=inter,
        intra_fractions=intra,
        prev_inter_fractions=inter.copy(),
        prev_intra_fractions=[f.copy() for f in intra],
        satisfaction=np.zeros(n),
        needs_flags=np.ones(n, dtype=bool),
        spare_flags=np.zeros(n, dtype=bool),
        prev_satisfaction=np.zeros(n),
        prev_needs_flags=np.ones(n, dtype=bool),
        prev_spare_flags=np.zeros(n, dtype=bool),
        rngs=rngs,
    )
    state.gains = _sample_gains(config, state)
    return state


def advance_slot(config: ScenarioConfig, state: ScenarioState) -> None:
    """Roll into the next slot: rotate history, move users, redraw channels.

    With ``freeze_channel`` set, positions and gains stay fixed and only the
    clock and the allocation history advance.
    """
    state.t += 1
    state.prev_inter_fractions = state.inter_fractions.copy()
    state.prev_intra_fractions = [f.copy() for f in state.intra_fractions]
    state.prev_satisfaction = state.satisfaction.copy()
    state.prev_needs_flags = state.needs_flags.copy()
    state.prev_spare_flags = state.spare_flags.copy()
    if config.freeze_channel:
        return
    state.mobility = [
        rwp_step(
            m,
            config.slot_duration_s,
            config.area_m,
            config.speed_bounds_m_s,
            config.pause_max_s,
            state.rngs.mobility[u],
        )
        for u, m in enumerate(state.mobility)
    ]
    state.gains = _sample_gains(config, state)
