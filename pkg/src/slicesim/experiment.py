"""Experiment drivers: training runs, evaluation runs, user-count sweeps.

An experiment is reproducible from (scenario file, hyper file, seed) alone:
episode and realization seeds derive from the base seed through fixed
substreams, outputs carry a manifest with the scenario fingerprint, and
re-running a command with the same inputs rewrites byte-identical CSVs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np
import yaml

from . import __version__, metrics
from .config import ConfigError, ScenarioConfig
from .drl import ALGORITHMS, AgentHyper, LogStandardizer, load_checkpoint, save_checkpoint
from .env import SlicingEnv
from .orchestrator import LearnedController, RssiController, SystemAgents, run_episode
from .scenario import agent_rng, episode_seed, substream

_STREAM_EVAL = 6

LEARNED_ALGORITHMS = ("td3", "ddpg", "ppo")
BASELINE_ALGORITHMS = ("rssi",)

#: Reference training settings for the full-scale scenario.
GLOBAL_DEFAULTS = AgentHyper(hidden=(300, 200), explore_sigma=0.2, buffer_capacity=100_000)
SLICE_DEFAULTS = AgentHyper(hidden=(500, 400), explore_sigma=0.1, buffer_capacity=1_000_000)
#: Temporally correlated exploration spreads per slice for the single-critic learner.
DDPG_SLICE_SIGMA = {"embb": 0.5}


def realization_seed(seed: int, index: int) -> int:
    return int(substream(seed, _STREAM_EVAL, index).integers(0, 2**63 - 1))


@dataclass(frozen=True)
class TrainPlan:
    episodes: int = 300
    episode_len: int = 50
    force_trigger_episodes: int = 200
    global_hyper: AgentHyper = GLOBAL_DEFAULTS
    slice_hyper: dict[str, AgentHyper] = field(default_factory=dict)

    def hyper_for_slice(self, slice_id: str, algorithm: str) -> AgentHyper:
        base = self.slice_hyper.get(slice_id, self.slice_hyper.get("default", SLICE_DEFAULTS))
        if algorithm == "ddpg" and slice_id not in self.slice_hyper:
            sigma = DDPG_SLICE_SIGMA.get(slice_id)
            if sigma is not None:
                base = base.override(explore_sigma=sigma)
        return base


def _hyper_from_dict(base: AgentHyper, raw: dict, where: str) -> AgentHyper:
    known = set(AgentHyper.__dataclass_fields__)
    updates = {}
    for key, value in raw.items():
        if key not in known:
            raise ConfigError(f"{where}.{key}", "unknown hyperparameter")
        if key == "hidden":
            value = tuple(int(v) for v in value)
        elif key in ("noise_kind",):
            value = str(value)
        elif key in (
            "target_update_freq",
            "batch_size",
            "buffer_capacity",
            "warmup_steps",
            "policy_delay",
            "rollout_len",
            "ppo_epochs",
        ):
            value = int(value)
        else:
            value = float(value)
        updates[key] = value
    return base.override(**updates)


def load_train_plan(path: str | Path | None) -> TrainPlan:
    """Training plan from a YAML file; missing file pieces keep the defaults."""
    if path is None:
        return TrainPlan()
    path = Path(path)
    if not path.exists():
        raise ConfigError("hyper", f"file not found: {path}")
    raw = yaml.safe_load(path.read_text()) or {}
    plan = TrainPlan(
        episodes=int(raw.get("episodes", 300)),
        episode_len=int(raw.get("episode_len", 50)),
        force_trigger_episodes=int(raw.get("force_trigger_episodes", 200)),
        global_hyper=_hyper_from_dict(GLOBAL_DEFAULTS, raw.get("global", {}) or {}, "global"),
        slice_hyper={
            str(key): _hyper_from_dict(SLICE_DEFAULTS, val or {}, f"slices.{key}")
            for key, val in (raw.get("slices", {}) or {}).items()
        },
    )
    if plan.episodes < 1:
        raise ConfigError("episodes", "must be >= 1")
    if plan.episode_len < 1:
        raise ConfigError("episode_len", "must be >= 1")
    return plan


def build_agents(
    env: SlicingEnv, algorithm: str, plan: TrainPlan, seed: int
) -> SystemAgents:
    if algorithm not in LEARNED_ALGORITHMS:
        raise ConfigError("algorithm", f"unknown learned algorithm {algorithm!r}")
    cls = ALGORITHMS[algorithm]
    n = env.num_slices
    g_hyper = plan.global_hyper
    if algorithm == "ddpg":
        g_hyper = g_hyper.override(noise_kind="ou")
    global_agent = cls(4 * n, n, g_hyper, agent_rng(seed, 0))
    slice_agents = []
    for s, spec in enumerate(env.config.slice_specs):
        hyper = plan.hyper_for_slice(spec.slice_id, algorithm)
        if algorithm == "ddpg":
            hyper = hyper.override(noise_kind="ou")
        slice_agents.append(
            cls(
                spec.num_users,
                spec.num_users,
                hyper,
                agent_rng(seed, s + 1),
                scaler=LogStandardizer(spec.num_users),
            )
        )
    return SystemAgents(algorithm=algorithm, global_agent=global_agent, slice_agents=slice_agents)


@dataclass
class TrainResult:
    curve: list[tuple[int, str, float]]
    agents: SystemAgents
    checkpoint_path: Path | None
    # slots on which the coordinator actually woke the global agent, one
    # count per episode; needed to turn episode returns into per-step means
    global_step_counts: list[int] = field(default_factory=list)


def train_system(
    scenario: ScenarioConfig,
    algorithm: str,
    plan: TrainPlan,
    seed: int,
    *,
    wic: bool = False,
    out_dir: Path | None = None,
) -> TrainResult:
    env = SlicingEnv(scenario, wic=wic, episode_len=plan.episode_len)
    agents = build_agents(env, algorithm, plan, seed)
    controller = LearnedController(env, agents, train=True)
    slice_ids = [spec.slice_id for spec in scenario.slice_specs]
    curve: list[tuple[int, str, float]] = []
    step_counts: list[int] = []
    for ep in range(plan.episodes):
        force = ep < plan.force_trigger_episodes
        result = run_episode(env, controller, episode_seed(seed, ep), force_trigger=force)
        curve.append((ep, "global", result.global_return))
        step_counts.append(result.global_steps)
        for s, sid in enumerate(slice_ids):
            curve.append((ep, sid, float(result.slice_returns[s])))
    checkpoint_path = None
    if out_dir is not None:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        checkpoint_path = out_dir / "checkpoint.slck"
        save_checkpoint(
            checkpoint_path,
            agents.state_arrays(),
            checkpoint_meta(scenario, algorithm, plan, seed, wic),
        )
        metrics.write_csv(out_dir / "train_curve.csv", metrics.CURVE_COLUMNS, curve)
        metrics.write_manifest(
            out_dir / "manifest.json",
            {
                "kind": "train",
                "schema_version": metrics.SCHEMA_VERSION,
                "code_version": __version__,
                "algorithm": algorithm,
                "wic": wic,
                "seed": seed,
                "episodes": plan.episodes,
                "episode_len": plan.episode_len,
                "force_trigger_episodes": plan.force_trigger_episodes,
                "scenario_fingerprint": metrics.scenario_fingerprint(scenario),
                "slice_ids": slice_ids,
                "alpha": scenario.alpha,
            },
        )
    return TrainResult(
        curve=curve,
        agents=agents,
        checkpoint_path=checkpoint_path,
        global_step_counts=step_counts,
    )


def checkpoint_meta(scenario, algorithm, plan, seed, wic) -> dict:
    hyper_map = {"global": _hyper_dict(plan.global_hyper)}
    for spec in scenario.slice_specs:
        hyper_map[spec.slice_id] = _hyper_dict(plan.hyper_for_slice(spec.slice_id, algorithm))
    return {
        "algorithm": algorithm,
        "wic": wic,
        "seed": seed,
        "episode_len": plan.episode_len,
        "num_slices": scenario.num_slices,
        "user_counts": [spec.num_users for spec in scenario.slice_specs],
        "slice_ids": [spec.slice_id for spec in scenario.slice_specs],
        "scenario_fingerprint": metrics.scenario_fingerprint(scenario),
        "hyper": hyper_map,
        "code_version": __version__,
    }


def _hyper_dict(hyper: AgentHyper) -> dict:
    out = {}
    for key in AgentHyper.__dataclass_fields__:
        val = getattr(hyper, key)
        out[key] = list(val) if isinstance(val, tuple) else val
    return out


def load_agents(checkpoint_path: str | Path, scenario: ScenarioConfig) -> tuple[SystemAgents, dict]:
    arrays, meta = load_checkpoint(checkpoint_path)
    if meta["num_slices"] != scenario.num_slices:
        raise ConfigError(
            "checkpoint", f"trained for {meta['num_slices']} slices, scenario has {scenario.num_slices}"
        )
    plan = TrainPlan(
        episode_len=meta["episode_len"],
        global_hyper=_hyper_from_dict(AgentHyper(), meta["hyper"]["global"], "checkpoint.global"),
        slice_hyper={
            sid: _hyper_from_dict(AgentHyper(), meta["hyper"][sid], f"checkpoint.{sid}")
            for sid in meta["slice_ids"]
        },
    )
    trained_cfg = scenario.with_user_counts(tuple(meta["user_counts"]))
    env = SlicingEnv(trained_cfg, wic=meta["wic"], episode_len=meta["episode_len"])
    agents = build_agents(env, meta["algorithm"], plan, meta["seed"])
    agents.load_state_arrays(arrays)
    return agents, meta


class _PaddedPolicy:
    """Evaluates a trained slice agent on fewer users than it was built for.

    Active users occupy the leading observation components (scaled with the
    agent's own running statistics); the rest are zero-padded, and only the
    leading action components are applied.
    """

    def __init__(self, agent, n_active: int):
        self.agent = agent
        self.n_active = n_active

    def reset_noise(self) -> None:
        pass

    def act(self, obs, explore: bool) -> np.ndarray:
        if explore:
            raise RuntimeError("padded policies are evaluation-only")
        scaler = self.agent.scaler
        x = np.zeros(self.agent.obs_dim)
        x[: self.n_active] = scaler.transform_prefix(obs, self.n_active)
        if hasattr(self.agent, "actor"):
            u = self.agent.actor.forward(x)[0][0]
        else:
            u = np.tanh(self.agent.mean_net.forward(x)[0][0])
        return u[: self.n_active]


def _eval_agents(agents: SystemAgents, scenario: ScenarioConfig, meta: dict) -> SystemAgents:
    """Adapt trained agents to the (possibly smaller) evaluated populations."""
    trained = meta["user_counts"]
    slice_agents = []
    for s, spec in enumerate(scenario.slice_specs):
        if spec.num_users > trained[s]:
            raise ConfigError(
                "users",
                f"slice {spec.slice_id}: {spec.num_users} users exceeds the "
                f"trained population {trained[s]}",
            )
        if spec.num_users == trained[s]:
            slice_agents.append(agents.slice_agents[s])
        else:
            slice_agents.append(_PaddedPolicy(agents.slice_agents[s], spec.num_users))
    return SystemAgents(
        algorithm=agents.algorithm, global_agent=agents.global_agent, slice_agents=slice_agents
    )


@dataclass
class EvalResult:
    out_dir: Path
    mean_objective: float
    mean_satisfaction: float
    mean_recon_cost: float


def _controller_for(algorithm, env, agents):
    if algorithm in BASELINE_ALGORITHMS:
        return RssiController(env.config)
    return LearnedController(env, agents, train=False)


def evaluate(
    scenario: ScenarioConfig,
    algorithm: str,
    *,
    realizations: int,
    seed: int,
    out_dir: Path,
    checkpoint_path: str | Path | None = None,
    seeds: list[int] | None = None,
    episode_len: int = 50,
    wic: bool = False,
) -> EvalResult:
    """Run evaluation realizations and write the full CSV bundle.

    For learned algorithms the objective averages satisfaction against
    reconfiguration cost; the demand-driven baseline replans every slot by
    design, so its objective is reported without the cost term.
    """
    agents = None
    meta: dict = {}
    if algorithm in LEARNED_ALGORITHMS:
        if checkpoint_path is None:
            raise ConfigError("checkpoint", "required for learned algorithms")
        loaded, meta = load_agents(checkpoint_path, scenario)
        if meta["algorithm"] != algorithm:
            raise ConfigError(
                "algorithm", f"checkpoint holds {meta['algorithm']!r}, requested {algorithm!r}"
            )
        agents = _eval_agents(loaded, scenario, meta)
        episode_len = meta["episode_len"]
        wic = meta["wic"]
    elif algorithm not in BASELINE_ALGORITHMS:
        raise ConfigError("algorithm", f"unknown algorithm {algorithm!r}")

    if seeds is None:
        seeds = [realization_seed(seed, i) for i in range(realizations)]
    if len(seeds) != realizations:
        raise ConfigError("seeds", f"need {realizations} seeds, got {len(seeds)}")

    slice_ids = [spec.slice_id for spec in scenario.slice_specs]
    all_system: list[list] = []
    all_slices: list[list] = []
    all_users: list[list] = []
    baseline = algorithm in BASELINE_ALGORITHMS
    for i, rseed in enumerate(seeds):
        env = SlicingEnv(scenario, wic=wic, episode_len=episode_len)
        controller = _controller_for(algorithm, env, agents)
        result = run_episode(env, controller, rseed)
        outcomes = result.outcomes
        if baseline:
            # replanning every slot is the mechanism, not a cost to bill
            for o in outcomes:
                o.objective = scenario.alpha * o.satisfaction
        all_system.extend(metrics.system_rows(i, outcomes))
        all_slices.extend(metrics.slice_rows(i, outcomes, slice_ids))
        all_users.extend(metrics.user_rows(i, outcomes, slice_ids))

    out_dir = Path(out_dir)
    metrics.write_csv(out_dir / "system.csv", metrics.SYSTEM_COLUMNS, all_system)
    metrics.write_csv(out_dir / "slices.csv", metrics.SLICE_COLUMNS, all_slices)
    metrics.write_csv(out_dir / "users.csv", metrics.USER_COLUMNS, all_users)
    stats = metrics.stats_rows(all_system, all_users, slice_ids, all_slices)
    metrics.write_csv(out_dir / "stats.csv", metrics.STATS_COLUMNS, stats)
    stat_map = {(r[0], r[1], r[2]): r[3] for r in stats}
    mean_objective = stat_map[("system", "objective", "mean")]
    metrics.write_manifest(
        out_dir / "manifest.json",
        {
            "kind": "eval",
            "schema_version": metrics.SCHEMA_VERSION,
            "code_version": __version__,
            "algorithm": algorithm,
            "wic": wic,
            "seed": seed,
            "seeds": [int(s) for s in seeds],
            "realizations": realizations,
            "episode_len": episode_len,
            "scenario_fingerprint": metrics.scenario_fingerprint(scenario),
            "slice_ids": slice_ids,
            "user_counts": [spec.num_users for spec in scenario.slice_specs],
            "alpha": scenario.alpha,
            "objective_includes_cost": not baseline,
            "checkpoint": str(checkpoint_path) if checkpoint_path else None,
        },
    )
    return EvalResult(
        out_dir=out_dir,
        mean_objective=mean_objective,
        mean_satisfaction=stat_map[("system", "satisfaction", "mean")],
        mean_recon_cost=stat_map[("system", "recon_cost", "mean")],
    )


def scale_user_counts(total: int, weights: tuple[int, ...]) -> tuple[int, ...]:
    """Split ``total`` users across slices proportionally (largest remainder)."""
    if total < 1:
        raise ConfigError("users", "total must be >= 1")
    weight_sum = sum(weights)
    raw = [total * w / weight_sum for w in weights]
    counts = [int(np.floor(r)) for r in raw]
    leftovers = total - sum(counts)
    order = sorted(range(len(weights)), key=lambda i: (-(raw[i] - counts[i]), i))
    for i in order[:leftovers]:
        counts[i] += 1
    if any(c < 1 for c in counts):
        raise ConfigError("users", f"total {total} leaves a slice empty: {tuple(counts)}")
    return tuple(counts)


def sweep(
    scenario: ScenarioConfig,
    algorithm: str,
    totals: list[int],
    *,
    realizations: int,
    seed: int,
    out_dir: Path,
    checkpoint_path: str | Path | None = None,
) -> Path:
    """Evaluate across total user counts; populations scale proportionally."""
    weights = tuple(spec.num_users for spec in scenario.slice_specs)
    out_dir = Path(out_dir)
    rows = []
    for total in totals:
        counts = scale_user_counts(total, weights)
        point_cfg = scenario.with_user_counts(counts)
        point = evaluate(
            point_cfg,
            algorithm,
            realizations=realizations,
            seed=seed,
            out_dir=out_dir / f"users_{total}",
            checkpoint_path=checkpoint_path,
        )
        rows.append(
            [total, algorithm, point.mean_objective, point.mean_satisfaction, point.mean_recon_cost]
        )
    metrics.write_csv(out_dir / "sweep.csv", metrics.SWEEP_COLUMNS, rows)
    metrics.write_manifest(
        out_dir / "manifest.json",
        {
            "kind": "sweep",
            "schema_version": metrics.SCHEMA_VERSION,
            "code_version": __version__,
            "algorithm": algorithm,
            "seed": seed,
            "realizations": realizations,
            "totals": [int(t) for t in totals],
            "scenario_fingerprint": metrics.scenario_fingerprint(scenario),
        },
    )
    return out_dir / "sweep.csv"
