"""Slot loop: coordinator trigger, shared per-slice records, episode driver.

After every slot each slice publishes its satisfaction and resource flags
to an append-only in-run database keyed by (slice, slot).  The coordinator
reads the previous slot's records and wakes the inter-slice allocator only
when some slice raised its needs flag; otherwise the split carries over.
Controllers plug the acting policy in: a learned stack (one global agent
plus one agent per slice) or the demand-driven baseline.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import json

import numpy as np

from .baselines import rssi_ip_allocate
from .config import ScenarioConfig
from .env import EnvObservations, SlicingEnv, SlotOutcome


class OrchestrationError(RuntimeError):
    pass


@dataclass(frozen=True)
class SliceRecord:
    slice_idx: int
    slot: int
    satisfaction: float
    needs_resources: bool
    has_spare: bool


class SharedDb:
    """Append-only per-run store of published slice records."""

    def __init__(self):
        self._records: dict[tuple[int, int], SliceRecord] = {}

    def __len__(self) -> int:
        return len(self._records)

    def publish(self, record: SliceRecord) -> None:
        key = (record.slice_idx, record.slot)
        if key in self._records:
            raise OrchestrationError(f"record for slice {key[0]} slot {key[1]} already published")
        self._records[key] = record

    def read_slot(self, slot: int, num_slices: int) -> list[SliceRecord]:
        records = []
        for s in range(num_slices):
            rec = self._records.get((s, slot))
            if rec is None:
                raise OrchestrationError(f"missing record for slice {s} slot {slot}")
            records.append(rec)
        return records

    def trigger(self, slot: int, num_slices: int) -> bool:
        return any(r.needs_resources for r in self.read_slot(slot, num_slices))

    def export_jsonl(self) -> str:
        lines = []
        for key in sorted(self._records):
            r = self._records[key]
            lines.append(
                json.dumps(
                    {
                        "slice": r.slice_idx,
                        "slot": r.slot,
                        "satisfaction": r.satisfaction,
                        "needs_resources": bool(r.needs_resources),
                        "has_spare": bool(r.has_spare),
                    },
                    sort_keys=True,
                )
            )
        return "\n".join(lines)


def map_action(u, low, high):
    """Affine map from the squashed [-1, 1] surface onto [low, high]."""
    u = np.asarray(u, dtype=float)
    return low + (u + 1.0) * 0.5 * (high - low)


@dataclass
class SystemAgents:
    """The learned stack: one global agent and one agent per slice."""

    algorithm: str
    global_agent: object
    slice_agents: list

    def all_agents(self):
        return [self.global_agent, *self.slice_agents]

    def state_arrays(self) -> dict[str, np.ndarray]:
        arrays = {}
        for key, val in self.global_agent.state_arrays().items():
            arrays[f"global/{key}"] = val
        for i, agent in enumerate(self.slice_agents):
            for key, val in agent.state_arrays().items():
                arrays[f"slice{i}/{key}"] = val
        return arrays

    def load_state_arrays(self, arrays: dict[str, np.ndarray]) -> None:
        self.global_agent.load_state_arrays(
            {k.split("/", 1)[1]: v for k, v in arrays.items() if k.startswith("global/")}
        )
        for i, agent in enumerate(self.slice_agents):
            prefix = f"slice{i}/"
            agent.load_state_arrays(
                {k.split("/", 1)[1]: v for k, v in arrays.items() if k.startswith(prefix)}
            )


class LearnedController:
    """Drives the env with the learned agents; trains them when asked."""

    def __init__(self, env: SlicingEnv, agents: SystemAgents, *, train: bool):
        self.env = env
        self.agents = agents
        self.train = train
        self._inter_lo, self._inter_hi = env.inter_action_bounds()
        self._slice_bounds = [env.slice_action_bounds(s) for s in range(env.num_slices)]
        self._obs: EnvObservations | None = None
        self._pending_global: tuple[np.ndarray, np.ndarray] | None = None
        self._pending_slices: list[tuple[np.ndarray, np.ndarray] | None] = []

    def begin_episode(self, obs: EnvObservations) -> None:
        self._obs = obs
        for agent in self.agents.all_agents():
            agent.reset_noise()

    def decide_inter(self, env: SlicingEnv, act: bool) -> None:
        if not act:
            env.carry_over()
            self._pending_global = None
            return
        u = self.agents.global_agent.act(self._obs.global_obs, explore=self.train)
        env.global_step(map_action(u, self._inter_lo, self._inter_hi))
        self._pending_global = (self._obs.global_obs, np.asarray(u, dtype=float))

    def decide_intra(self, env: SlicingEnv, s: int) -> None:
        u = self.agents.slice_agents[s].act(self._obs.slice_obs[s], explore=self.train)
        lo, hi = self._slice_bounds[s]
        env.slice_step(s, map_action(u, lo, hi))
        while len(self._pending_slices) <= s:
            self._pending_slices.append(None)
        self._pending_slices[s] = (self._obs.slice_obs[s], np.asarray(u, dtype=float))

    def after_slot(self, outcome: SlotOutcome, next_obs: EnvObservations) -> None:
        if self.train:
            if self._pending_global is not None:
                obs_g, u_g = self._pending_global
                self.agents.global_agent.observe(
                    obs_g, u_g, outcome.global_reward, next_obs.global_obs, outcome.done
                )
                self.agents.global_agent.update()
            for s, pending in enumerate(self._pending_slices):
                obs_s, u_s = pending
                self.agents.slice_agents[s].observe(
                    obs_s, u_s, outcome.slice_rewards[s], next_obs.slice_obs[s], outcome.done
                )
                self.agents.slice_agents[s].update()
        self._obs = next_obs
        self._pending_global = None
        self._pending_slices = []


class RssiController:
    """Replans both stages every slot from the current channel draw."""

    uses_trigger = False

    def __init__(self, config: ScenarioConfig, contracted_users: tuple[int, ...] | None = None):
        self.config = config
        self.contracted_users = contracted_users
        self._allocation = None

    def begin_episode(self, obs: EnvObservations) -> None:
        self._allocation = None

    def decide_inter(self, env: SlicingEnv, act: bool) -> None:
        self._allocation = rssi_ip_allocate(env.state.gains, self.config, self.contracted_users)
        env.apply_inter_unchecked(self._allocation.inter_fractions)

    def decide_intra(self, env: SlicingEnv, s: int) -> None:
        env.apply_intra_unchecked(s, self._allocation.intra_fractions[s])

    def after_slot(self, outcome: SlotOutcome, next_obs: EnvObservations) -> None:
        self._allocation = None


@dataclass
class EpisodeResult:
    outcomes: list[SlotOutcome]
    db: SharedDb
    global_return: float
    slice_returns: np.ndarray
    global_steps: int


def run_slot(env: SlicingEnv, controller, db: SharedDb, *, force_trigger: bool = False) -> SlotOutcome:
    """One slot: trigger check, both decision stages, settlement, publication."""
    slot = env.state.t
    uses_trigger = getattr(controller, "uses_trigger", True)
    trig = db.trigger(slot - 1, env.num_slices)
    act_global = True if not uses_trigger else (trig or force_trigger)
    controller.decide_inter(env, act_global)
    for s in range(env.num_slices):
        controller.decide_intra(env, s)
    outcome = env.settle()
    for s in range(env.num_slices):
        db.publish(
            SliceRecord(
                slice_idx=s,
                slot=slot,
                satisfaction=float(outcome.slice_satisfaction[s]),
                needs_resources=bool(outcome.needs_flags[s]),
                has_spare=bool(outcome.spare_flags[s]),
            )
        )
    next_obs = env.advance()
    controller.after_slot(outcome, next_obs)
    return outcome


def run_episode(env: SlicingEnv, controller, seed: int, *, force_trigger: bool = False) -> EpisodeResult:
    """Drive one full episode, seeding the scenario and the record store."""
    obs = env.reset(seed)
    db = SharedDb()
    st = env.state
    for s in range(env.num_slices):
        db.publish(
            SliceRecord(
                slice_idx=s,
                slot=st.t - 1,
                satisfaction=float(st.prev_satisfaction[s]),
                needs_resources=bool(st.prev_needs_flags[s]),
                has_spare=bool(st.prev_spare_flags[s]),
            )
        )
    controller.begin_episode(obs)
    outcomes: list[SlotOutcome] = []
    while True:
        outcome = run_slot(env, controller, db, force_trigger=force_trigger)
        outcomes.append(outcome)
        if outcome.done:
            break
    global_rewards = [o.global_reward for o in outcomes if o.global_reward is not None]
    slice_returns = np.sum([o.slice_rewards for o in outcomes], axis=0)
    return EpisodeResult(
        outcomes=outcomes,
        db=db,
        global_return=float(np.sum(global_rewards)) if global_rewards else 0.0,
        slice_returns=np.asarray(slice_returns, dtype=float),
        global_steps=len(global_rewards),
    )
