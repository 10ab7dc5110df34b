"""Run outputs: schema-stable CSV tables and summary statistics.

Floats are written with ``repr`` (shortest round-trip form), so re-parsing
a file recovers the exact doubles and identical runs produce byte-identical
files.  Booleans are written as 0/1.  Every run directory also carries a
JSON manifest with the schema version, the scenario fingerprint and the
seeds, which is what downstream consumers should key on.
"""

from __future__ import annotations

import csv
import hashlib
import json
from dataclasses import asdict
from pathlib import Path

import numpy as np

from .config import ScenarioConfig
from .env import SlotOutcome

SCHEMA_VERSION = 1

SYSTEM_COLUMNS = [
    "realization",
    "slot",
    "satisfaction",
    "recon_cost",
    "objective",
    "trigger",
    "global_acted",
    "global_valid",
    "rate_violation_frac",
]

SLICE_COLUMNS = [
    "realization",
    "slot",
    "slice",
    "satisfaction",
    "recon_cost",
    "needs_flag",
    "spare_flag",
    "fraction",
    "intra_valid",
    "wastage",
]

USER_COLUMNS = [
    "realization",
    "slice",
    "user",
    "mean_rate_bps",
    "mean_satisfaction",
    "mean_wastage",
    "mean_fraction",
]

CURVE_COLUMNS = ["episode", "agent", "reward"]

STATS_COLUMNS = ["scope", "metric", "stat", "value"]

SWEEP_COLUMNS = [
    "total_users",
    "algorithm",
    "mean_objective",
    "mean_satisfaction",
    "mean_recon_cost",
]


def fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if value is None:
        return ""
    if isinstance(value, float) or isinstance(value, np.floating):
        return repr(float(value))
    return str(value)


def write_csv(path: Path, columns: list[str], rows) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([fmt(v) for v in row])


def system_rows(realization: int, outcomes: list[SlotOutcome]):
    for o in outcomes:
        yield [
            realization,
            o.slot,
            o.satisfaction,
            o.recon_cost,
            o.objective,
            o.trigger,
            o.global_acted,
            o.global_valid if o.global_valid is not None else "",
            o.rate_violation_frac,
        ]


def slice_rows(realization: int, outcomes: list[SlotOutcome], slice_ids: list[str]):
    for o in outcomes:
        for s, sid in enumerate(slice_ids):
            yield [
                realization,
                o.slot,
                sid,
                o.slice_satisfaction[s],
                o.slice_cost[s],
                o.needs_flags[s],
                o.spare_flags[s],
                o.inter_fractions[s],
                o.slice_valid[s],
                o.slice_wastage[s],
            ]


def user_rows(realization: int, outcomes: list[SlotOutcome], slice_ids: list[str]):
    """Per-user episode means: one row per user per realization."""
    n_slots = len(outcomes)
    for s, sid in enumerate(slice_ids):
        rates = np.stack([o.user_rates[s] for o in outcomes])
        sats = np.stack([o.user_satisfaction[s] for o in outcomes])
        waste = np.stack([o.user_wastage[s] for o in outcomes])
        fracs = np.stack([o.user_fractions[s] for o in outcomes])
        for u in range(rates.shape[1]):
            yield [
                realization,
                sid,
                u,
                rates[:, u].mean(),
                sats[:, u].mean(),
                waste[:, u].mean(),
                fracs[:, u].mean(),
            ]


_QUANTILE_STATS = [("q1", 25.0), ("median", 50.0), ("q3", 75.0)]


def distribution_stats(values: np.ndarray) -> list[tuple[str, float]]:
    stats = [("mean", float(values.mean()))]
    for name, q in _QUANTILE_STATS:
        stats.append((name, float(np.percentile(values, q))))
    stats.append(("min", float(values.min())))
    stats.append(("max", float(values.max())))
    return stats


def stats_rows(
    all_system: list[list],
    all_users: list[list],
    slice_ids: list[str],
    all_slices: list[list],
):
    """Long-format summary statistics recomputable from the granular tables."""
    rows = []
    sys_arr = {
        "satisfaction": np.array([r[2] for r in all_system], dtype=float),
        "recon_cost": np.array([r[3] for r in all_system], dtype=float),
        "objective": np.array([r[4] for r in all_system], dtype=float),
        "rate_violation_frac": np.array([r[8] for r in all_system], dtype=float),
    }
    for metric, values in sys_arr.items():
        rows.append(["system", metric, "mean", float(values.mean())])
    for sid in slice_ids:
        srows = [r for r in all_slices if r[2] == sid]
        for metric, idx in (("satisfaction", 3), ("recon_cost", 4), ("fraction", 7), ("wastage", 9)):
            values = np.array([r[idx] for r in srows], dtype=float)
            rows.append([f"slice:{sid}", metric, "mean", float(values.mean())])
        urows = [r for r in all_users if r[1] == sid]
        for metric, idx in (
            ("user_rate_bps", 3),
            ("user_satisfaction", 4),
            ("user_wastage", 5),
            ("user_fraction", 6),
        ):
            values = np.array([r[idx] for r in urows], dtype=float)
            for stat, value in distribution_stats(values):
                rows.append([f"slice:{sid}", metric, stat, value])
    return rows


def scenario_fingerprint(config: ScenarioConfig) -> str:
    blob = json.dumps(asdict(config), sort_keys=True, default=str).encode("utf-8")
    return hashlib.sha256(blob).hexdigest()


def write_manifest(path: Path, payload: dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
