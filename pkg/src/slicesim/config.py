"""Scenario configuration: slice specs, radio parameters, file loading.

A scenario describes one cell: total bandwidth, transmit power, noise
density, the served slices with their user counts and rate requirements,
and the fraction bounds the two allocation stages must respect.  Radio
quantities are stored in SI units; the YAML surface accepts the usual
dBm/GHz/MHz forms and converts once at load time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from pathlib import Path

import yaml


class ConfigError(ValueError):
    """A scenario or experiment value violates an invariant.

    ``field_name`` identifies the offending entry so callers (and the CLI,
    which maps this to exit code 2) can point at the exact key.
    """

    def __init__(self, field_name: str, message: str):
        super().__init__(f"{field_name}: {message}")
        self.field_name = field_name


def dbm_to_watt(dbm: float) -> float:
    return 10.0 ** (dbm / 10.0) * 1e-3


@dataclass(frozen=True)
class SliceSpec:
    """One tenant slice: identity, population and per-user allocation limits."""

    slice_id: str
    num_users: int
    rate_requirement_bps: float
    user_fraction_bounds: tuple[float, float]

    def validate(self) -> None:
        lo, hi = self.user_fraction_bounds
        if self.num_users < 1:
            raise ConfigError(f"slices[{self.slice_id}].num_users", "must be >= 1")
        if self.rate_requirement_bps <= 0:
            raise ConfigError(f"slices[{self.slice_id}].rate_requirement_bps", "must be > 0")
        if not (0 < lo <= hi <= 1):
            raise ConfigError(
                f"slices[{self.slice_id}].user_fraction_bounds",
                f"need 0 < min <= max <= 1, got ({lo}, {hi})",
            )
        if self.num_users * lo > 1 + 1e-12:
            raise ConfigError(
                f"slices[{self.slice_id}].user_fraction_bounds",
                f"num_users * min fraction = {self.num_users * lo:.4f} exceeds the slice budget",
            )


@dataclass(frozen=True)
class ScenarioConfig:
    """Full cell description, all radio values in SI units."""

    total_bandwidth_hz: float
    tx_power_w: float
    noise_density_w_per_hz: float
    carrier_freq_ghz: float
    area_m: float
    slice_specs: tuple[SliceSpec, ...]
    global_fraction_bounds: tuple[float, float]
    alpha: float
    rho: float
    xi: float
    gamma_th: float
    slot_duration_s: float = 1.0
    shadow_std_db: float = 4.0
    speed_bounds_m_s: tuple[float, float] = (1.0, 4.0)
    pause_max_s: float = 300.0
    freeze_channel: bool = False
    rng_seed: int = 0

    @property
    def num_slices(self) -> int:
        return len(self.slice_specs)

    @property
    def num_users(self) -> int:
        return sum(s.num_users for s in self.slice_specs)

    def validate(self) -> None:
        if self.total_bandwidth_hz <= 0:
            raise ConfigError("total_bandwidth_hz", "must be > 0")
        if self.tx_power_w <= 0:
            raise ConfigError("tx_power_w", "must be > 0")
        if self.noise_density_w_per_hz <= 0:
            raise ConfigError("noise_density_w_per_hz", "must be > 0")
        if self.carrier_freq_ghz <= 0:
            raise ConfigError("carrier_freq_ghz", "must be > 0")
        if self.area_m <= 0:
            raise ConfigError("area_m", "must be > 0")
        if not self.slice_specs:
            raise ConfigError("slices", "at least one slice required")
        ids = [s.slice_id for s in self.slice_specs]
        if len(set(ids)) != len(ids):
            raise ConfigError("slices", f"duplicate slice_id in {ids}")
        for spec in self.slice_specs:
            spec.validate()
        lo, hi = self.global_fraction_bounds
        if not (0 < lo <= hi <= 1):
            raise ConfigError("global_fraction_bounds", f"need 0 < min <= max <= 1, got ({lo}, {hi})")
        if self.num_slices * lo > 1 + 1e-12:
            raise ConfigError(
                "global_fraction_bounds",
                f"num_slices * min fraction = {self.num_slices * lo:.4f} exceeds the cell budget",
            )
        if not (0 <= self.alpha <= 1):
            raise ConfigError("alpha", "must be in [0, 1]")
        if self.rho <= 0:
            raise ConfigError("rho", "must be > 0")
        if self.xi <= 1:
            raise ConfigError("xi", "must be > 1")
        if not (0 <= self.gamma_th <= 1):
            raise ConfigError("gamma_th", "must be in [0, 1]")
        if self.slot_duration_s <= 0:
            raise ConfigError("slot_duration_s", "must be > 0")
        if self.shadow_std_db < 0:
            raise ConfigError("shadow_std_db", "must be >= 0")
        vlo, vhi = self.speed_bounds_m_s
        if not (0 < vlo <= vhi):
            raise ConfigError("speed_bounds_m_s", f"need 0 < min <= max, got ({vlo}, {vhi})")
        if self.pause_max_s < 0:
            raise ConfigError("pause_max_s", "must be >= 0")

    def with_user_counts(self, counts: tuple[int, ...]) -> "ScenarioConfig":
        """Same scenario with rescaled slice populations (sweep support)."""
        if len(counts) != self.num_slices:
            raise ConfigError("users", f"expected {self.num_slices} counts, got {len(counts)}")
        specs = tuple(replace(s, num_users=n) for s, n in zip(self.slice_specs, counts))
        cfg = replace(self, slice_specs=specs)
        cfg.validate()
        return cfg


#: Reference cell used throughout: 20 MHz at 3 GHz, 30 dBm, -174 dBm/Hz noise,
#: three slices (broadband / low-latency / machine-type) on a 500 m square.
DEFAULT_SLICES = (
    SliceSpec("embb", 20, 10e6, (0.005, 0.5)),
    SliceSpec("urllc", 70, 250e3, (0.0014, 0.14)),
    SliceSpec("mmtc", 210, 12e3, (0.00047, 0.047)),
)


def default_config(**overrides) -> ScenarioConfig:
    cfg = ScenarioConfig(
        total_bandwidth_hz=20e6,
        tx_power_w=dbm_to_watt(30.0),
        noise_density_w_per_hz=dbm_to_watt(-174.0),
        carrier_freq_ghz=3.0,
        area_m=500.0,
        slice_specs=DEFAULT_SLICES,
        global_fraction_bounds=(0.01, 0.95),
        alpha=0.5,
        rho=1.3,
        xi=5.0,
        gamma_th=0.8,
    )
    if overrides:
        cfg = replace(cfg, **overrides)
    cfg.validate()
    return cfg


def _require(mapping: dict, key: str, where: str):
    if key not in mapping:
        raise ConfigError(f"{where}{key}", "missing required key")
    return mapping[key]


def scenario_from_dict(raw: dict) -> ScenarioConfig:
    """Build a ScenarioConfig from the YAML mapping (dBm keys converted here)."""
    if not isinstance(raw, dict):
        raise ConfigError("scenario", "top level must be a mapping")
    slices = []
    for i, entry in enumerate(_require(raw, "slices", "")):
        where = f"slices[{i}]."
        bounds = _require(entry, "user_fraction_bounds", where)
        slices.append(
            SliceSpec(
                slice_id=str(_require(entry, "slice_id", where)),
                num_users=int(_require(entry, "num_users", where)),
                rate_requirement_bps=float(_require(entry, "rate_requirement_bps", where)),
                user_fraction_bounds=(float(bounds[0]), float(bounds[1])),
            )
        )
    gb = _require(raw, "global_fraction_bounds", "")
    speed = raw.get("speed_bounds_m_s", (1.0, 4.0))
    cfg = ScenarioConfig(
        total_bandwidth_hz=float(_require(raw, "total_bandwidth_hz", "")),
        tx_power_w=dbm_to_watt(float(_require(raw, "tx_power_dbm", ""))),
        noise_density_w_per_hz=dbm_to_watt(float(_require(raw, "noise_density_dbm_hz", ""))),
        carrier_freq_ghz=float(_require(raw, "carrier_freq_ghz", "")),
        area_m=float(_require(raw, "area_m", "")),
        slice_specs=tuple(slices),
        global_fraction_bounds=(float(gb[0]), float(gb[1])),
        alpha=float(_require(raw, "alpha", "")),
        rho=float(_require(raw, "rho", "")),
        xi=float(_require(raw, "xi", "")),
        gamma_th=float(_require(raw, "gamma_th", "")),
        slot_duration_s=float(raw.get("slot_duration_s", 1.0)),
        shadow_std_db=float(raw.get("shadow_std_db", 4.0)),
        speed_bounds_m_s=(float(speed[0]), float(speed[1])),
        pause_max_s=float(raw.get("pause_max_s", 300.0)),
        freeze_channel=bool(raw.get("freeze_channel", False)),
        rng_seed=int(raw.get("rng_seed", 0)),
    )
    cfg.validate()
    return cfg


def load_scenario(path: str | Path) -> ScenarioConfig:
    path = Path(path)
    if not path.exists():
        raise ConfigError("scenario", f"file not found: {path}")
    try:
        raw = yaml.safe_load(path.read_text())
    except yaml.YAMLError as exc:
        raise ConfigError("scenario", f"invalid YAML in {path}: {exc}") from exc
    return scenario_from_dict(raw)
