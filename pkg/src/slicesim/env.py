"""Two-stage allocation environment over one scenario.

Each slot runs through a fixed phase order: one inter-slice decision
(either an explicit action or a carry-over), then one intra-slice decision
per slice, then ``settle`` which prices the slot (rates, satisfactions,
flags, costs, rewards) and finally ``advance`` which rolls the scenario
into the next slot and returns the next observations.

Invalid actions never touch the allocation: the offending stage keeps its
previous fractions and the acting agent is paid the flat penalty of -1.
Valid rewards live in (-1, 1], so reward == -1 identifies rejection
exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import isolation
from .channel import data_rate_bps
from .config import ScenarioConfig
from .isolation import SliceSnapshot
from .qos import SatisfactionParams, resource_wastage, slice_satisfaction, system_satisfaction, user_satisfaction
from .scenario import ScenarioState, advance_slot, init_scenario

PENALTY_REWARD = -1.0


class ProtocolError(RuntimeError):
    """A slot phase was invoked out of order or twice."""


@dataclass(frozen=True)
class EnvObservations:
    """What the agents see when deciding the upcoming slot."""

    global_obs: np.ndarray  # [satisfactions | needs | spare | fractions], previous slot
    slice_obs: list[np.ndarray]  # current-slot channel gains per slice
    trigger: bool  # any slice flagged as needing resources


@dataclass
class SlotOutcome:
    """Everything the settled slot produced."""

    slot: int
    done: bool
    trigger: bool
    global_acted: bool
    global_valid: bool | None
    global_violations: list[str]
    global_reward: float | None
    slice_valid: list[bool]
    slice_violations: list[list[str]]
    slice_rewards: list[float]
    satisfaction: float
    recon_cost: float
    objective: float
    rate_violation_frac: float
    inter_fractions: np.ndarray
    slice_satisfaction: np.ndarray
    slice_cost: np.ndarray
    needs_flags: np.ndarray
    spare_flags: np.ndarray
    slice_wastage: np.ndarray
    user_rates: list[np.ndarray]
    user_satisfaction: list[np.ndarray]
    user_fractions: list[np.ndarray]
    user_wastage: list[np.ndarray]


def flatten_global_observation(
    satisfactions, needs_flags, spare_flags, fractions
) -> np.ndarray:
    return np.concatenate(
        [
            np.asarray(satisfactions, dtype=float),
            np.asarray(needs_flags, dtype=float),
            np.asarray(spare_flags, dtype=float),
            np.asarray(fractions, dtype=float),
        ]
    )


def unflatten_global_observation(obs: np.ndarray, num_slices: int):
    obs = np.asarray(obs, dtype=float)
    if obs.shape != (4 * num_slices,):
        raise ValueError(f"expected shape ({4 * num_slices},), got {obs.shape}")
    parts = obs.reshape(4, num_slices)
    return parts[0], parts[1].astype(bool), parts[2].astype(bool), parts[3]


class SlicingEnv:
    """Coupled global/per-slice decision process for one configured cell."""

    def __init__(self, config: ScenarioConfig, *, wic: bool = False, episode_len: int = 50):
        config.validate()
        self.config = config
        self.wic = wic
        self.episode_len = episode_len
        self.params = SatisfactionParams.from_elasticity(config.rho, config.xi)
        self.state: ScenarioState | None = None
        self._phase = "idle"
        self._step_count = 0
        self._global_acted = False
        self._global_violations: list[str] = []
        self._slices_stepped: set[int] = set()
        self._slice_violations: list[list[str]] = []

    # -- action space geometry ------------------------------------------------

    @property
    def num_slices(self) -> int:
        return self.config.num_slices

    def inter_action_bounds(self) -> tuple[np.ndarray, np.ndarray]:
        n = self.num_slices
        if self.wic:
            return np.zeros(n), np.ones(n)
        lo, hi = self.config.global_fraction_bounds
        return np.full(n, lo), np.full(n, hi)

    def slice_action_bounds(self, s: int) -> tuple[np.ndarray, np.ndarray]:
        n = self.config.slice_specs[s].num_users
        if self.wic:
            return np.zeros(n), np.ones(n)
        lo, hi = self.config.slice_specs[s].user_fraction_bounds
        return np.full(n, lo), np.full(n, hi)

    def describe(self) -> dict:
        """Machine-readable interface descriptor for external agents."""
        g_lo, g_hi = self.inter_action_bounds()
        slices = []
        for s, spec in enumerate(self.config.slice_specs):
            lo, hi = self.slice_action_bounds(s)
            slices.append(
                {
                    "slice_id": spec.slice_id,
                    "observation_dim": spec.num_users,
                    "action_dim": spec.num_users,
                    "action_low": lo.tolist(),
                    "action_high": hi.tolist(),
                    "reward_range": [-1.0, 1.0],
                }
            )
        return {
            "version": 1,
            "episode_len": self.episode_len,
            "wic": self.wic,
            "global": {
                "observation_dim": 4 * self.num_slices,
                "action_dim": self.num_slices,
                "action_low": g_lo.tolist(),
                "action_high": g_hi.tolist(),
                "reward_range": [-1.0, 1.0],
            },
            "slices": slices,
        }

    # -- observations ----------------------------------------------------------

    def global_observation(self) -> np.ndarray:
        st = self.state
        return flatten_global_observation(
            st.prev_satisfaction, st.prev_needs_flags, st.prev_spare_flags, st.prev_inter_fractions
        )

    def slice_observation(self, s: int) -> np.ndarray:
        return self.state.gains[s].copy()

    def observations(self) -> EnvObservations:
        return EnvObservations(
            global_obs=self.global_observation(),
            slice_obs=[self.slice_observation(s) for s in range(self.num_slices)],
            trigger=self.trigger_active,
        )

    @property
    def trigger_active(self) -> bool:
        return bool(np.any(self.state.prev_needs_flags))

    # -- slot lifecycle ----------------------------------------------------------

    def reset(self, seed: int) -> EnvObservations:
        """Initialize the scenario and advance into the first decision slot."""
        self.state = init_scenario(self.config, seed)
        advance_slot(self.config, self.state)
        self._step_count = 0
        self._begin_slot()
        return self.observations()

    def _begin_slot(self):
        self._phase = "inter"
        self._global_acted = False
        self._global_violations = []
        self._slices_stepped = set()
        self._slice_violations = [[] for _ in range(self.num_slices)]

    def global_step(self, fractions) -> list[str]:
        """Apply an inter-slice action; on any violation the split is frozen."""
        if self._phase != "inter":
            raise ProtocolError(f"global_step in phase {self._phase}")
        st = self.state
        violations = isolation.validate_inter_action(
            fractions,
            st.prev_needs_flags,
            st.prev_spare_flags,
            st.prev_inter_fractions,
            self.config.global_fraction_bounds,
            enforce_isolation=not self.wic,
        )
        if not violations:
            st.inter_fractions = np.array(fractions, dtype=float)
        else:
            st.inter_fractions = st.prev_inter_fractions.copy()
        self._global_acted = True
        self._global_violations = violations
        self._phase = "intra"
        return violations

    def carry_over(self) -> None:
        """No inter-slice reallocation this slot; previous split stands."""
        if self._phase != "inter":
            raise ProtocolError(f"carry_over in phase {self._phase}")
        self.state.inter_fractions = self.state.prev_inter_fractions.copy()
        self._global_acted = False
        self._phase = "intra"

    def apply_inter_unchecked(self, fractions) -> None:
        """Direct apply for allocators outside the constraint system.

        The budget must still hold; bounds and direction checks are the
        caller's business.
        """
        if self._phase != "inter":
            raise ProtocolError(f"apply_inter_unchecked in phase {self._phase}")
        f = np.array(fractions, dtype=float)
        if float(f.sum()) > 1.0 + 1e-12:
            raise ValueError("inter-slice fractions exceed the cell budget")
        self.state.inter_fractions = f
        self._global_acted = True
        self._global_violations = []
        self._phase = "intra"

    def apply_intra_unchecked(self, s: int, fractions) -> None:
        if self._phase != "intra":
            raise ProtocolError(f"apply_intra_unchecked in phase {self._phase}")
        if s in self._slices_stepped:
            raise ProtocolError(f"slice {s} already stepped this slot")
        f = np.array(fractions, dtype=float)
        if float(f.sum()) > 1.0 + 1e-12:
            raise ValueError("intra-slice fractions exceed the slice budget")
        self.state.intra_fractions[s] = f
        self._slices_stepped.add(s)
        self._slice_violations[s] = []

    def slice_step(self, s: int, fractions) -> list[str]:
        """Apply one slice's per-user action; violations freeze that slice."""
        if self._phase != "intra":
            raise ProtocolError(f"slice_step in phase {self._phase}")
        if s in self._slices_stepped:
            raise ProtocolError(f"slice {s} already stepped this slot")
        st = self.state
        violations = isolation.validate_intra_action(
            fractions,
            self.config.slice_specs[s].user_fraction_bounds,
            enforce_isolation=not self.wic,
        )
        if not violations:
            st.intra_fractions[s] = np.array(fractions, dtype=float)
        else:
            st.intra_fractions[s] = st.prev_intra_fractions[s].copy()
        self._slices_stepped.add(s)
        self._slice_violations[s] = violations
        return violations

    def settle(self) -> SlotOutcome:
        """Price the slot with the effective allocations of both stages."""
        if self._phase != "intra" or len(self._slices_stepped) != self.num_slices:
            raise ProtocolError("settle before every slice stepped")
        cfg = self.config
        st = self.state
        w = cfg.total_bandwidth_hz
        rates, user_sats, wastages = [], [], []
        slice_sats = np.empty(self.num_slices)
        slice_costs = np.empty(self.num_slices)
        needs = np.empty(self.num_slices, dtype=bool)
        spare = np.empty(self.num_slices, dtype=bool)
        slice_waste = np.empty(self.num_slices)
        violated = 0
        for s, spec in enumerate(cfg.slice_specs):
            slice_bw = st.inter_fractions[s] * w
            r = data_rate_bps(
                st.intra_fractions[s], slice_bw, st.gains[s], cfg.tx_power_w, cfg.noise_density_w_per_hz
            )
            r = np.asarray(r, dtype=float)
            sats = np.asarray(user_satisfaction(r, spec.rate_requirement_bps, self.params), dtype=float)
            waste = np.asarray(resource_wastage(r, spec.rate_requirement_bps), dtype=float)
            rates.append(r)
            user_sats.append(sats)
            wastages.append(waste)
            slice_sats[s] = slice_satisfaction(sats)
            slice_waste[s] = float(waste.mean())
            slice_costs[s] = isolation.slice_recon_cost(
                st.prev_satisfaction[s],
                slice_sats[s],
                st.prev_inter_fractions[s] * w,
                slice_bw,
            )
            snapshot = SliceSnapshot(
                rates_bps=r,
                rate_requirement_bps=spec.rate_requirement_bps,
                intra_fractions=st.intra_fractions[s],
                gains=st.gains[s],
                satisfaction=slice_sats[s],
                user_fraction_min=spec.user_fraction_bounds[0],
            )
            flags = isolation.compute_flags(snapshot, cfg.gamma_th)
            needs[s] = flags.needs_resources
            spare[s] = flags.has_spare
            violated += int(np.count_nonzero(r < spec.rate_requirement_bps))
        st.satisfaction = slice_sats
        st.needs_flags = needs
        st.spare_flags = spare
        gamma = system_satisfaction(slice_sats)
        cost = isolation.total_recon_cost(slice_costs)
        obj = isolation.objective(gamma, cost, cfg.alpha)
        trigger = self.trigger_active
        global_valid = None
        global_reward = None
        if self._global_acted:
            global_valid = not self._global_violations
            global_reward = obj if global_valid else PENALTY_REWARD
        slice_valid = [not v for v in self._slice_violations]
        slice_rewards = [
            float(slice_sats[s]) if slice_valid[s] else PENALTY_REWARD for s in range(self.num_slices)
        ]
        self._step_count += 1
        self._phase = "settled"
        return SlotOutcome(
            slot=st.t,
            done=self._step_count >= self.episode_len,
            trigger=trigger,
            global_acted=self._global_acted,
            global_valid=global_valid,
            global_violations=list(self._global_violations),
            global_reward=global_reward,
            slice_valid=slice_valid,
            slice_violations=[list(v) for v in self._slice_violations],
            slice_rewards=slice_rewards,
            satisfaction=gamma,
            recon_cost=cost,
            objective=obj,
            rate_violation_frac=violated / cfg.num_users,
            inter_fractions=st.inter_fractions.copy(),
            slice_satisfaction=slice_sats.copy(),
            slice_cost=slice_costs.copy(),
            needs_flags=needs.copy(),
            spare_flags=spare.copy(),
            slice_wastage=slice_waste.copy(),
            user_rates=[r.copy() for r in rates],
            user_satisfaction=[u.copy() for u in user_sats],
            user_fractions=[f.copy() for f in st.intra_fractions],
            user_wastage=[wt.copy() for wt in wastages],
        )

    def advance(self) -> EnvObservations:
        """Roll into the next slot and return its decision observations."""
        if self._phase != "settled":
            raise ProtocolError(f"advance in phase {self._phase}")
        advance_slot(self.config, self.state)
        self._begin_slot()
        return self.observations()


def make_wic_env(env: SlicingEnv) -> SlicingEnv:
    """Same scenario with the isolation checks disabled and full action range."""
    return SlicingEnv(env.config, wic=True, episode_len=env.episode_len)
