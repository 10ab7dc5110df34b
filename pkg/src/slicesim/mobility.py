"""Random-waypoint movement inside a square coverage area.

Each user walks straight toward a uniformly drawn waypoint at a speed drawn
once per leg, pauses there for a uniform time, then draws the next leg.
Steps are slot-sized; when an arrival or a pause expiry lands inside a slot
the leftover slot time is consumed by the pause countdown rather than by a
second movement leg.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np


@dataclass(frozen=True)
class MobilityState:
    position: np.ndarray  # (2,) metres
    waypoint: np.ndarray
    speed_m_s: float
    pause_remaining_s: float


def draw_waypoint(rng: np.random.Generator, area_m: float) -> np.ndarray:
    return rng.uniform(0.0, area_m, size=2)


def draw_speed(rng: np.random.Generator, speed_bounds: tuple[float, float]) -> float:
    return float(rng.uniform(speed_bounds[0], speed_bounds[1]))


def init_mobility(
    rng: np.random.Generator, area_m: float, speed_bounds: tuple[float, float]
) -> MobilityState:
    """Uniform start position, already moving toward a first waypoint."""
    return MobilityState(
        position=draw_waypoint(rng, area_m),
        waypoint=draw_waypoint(rng, area_m),
        speed_m_s=draw_speed(rng, speed_bounds),
        pause_remaining_s=0.0,
    )


def rwp_step(
    m: MobilityState,
    dt: float,
    area_m: float,
    speed_bounds: tuple[float, float],
    pause_max_s: float,
    rng: np.random.Generator,
) -> MobilityState:
    """Advance one slot of duration ``dt`` seconds."""
    if m.pause_remaining_s > 0:
        remaining = m.pause_remaining_s - dt
        if remaining > 0:
            return replace(m, pause_remaining_s=remaining)
        # pause ran out inside the slot; next leg starts on the next step
        return MobilityState(
            position=m.position,
            waypoint=draw_waypoint(rng, area_m),
            speed_m_s=draw_speed(rng, speed_bounds),
            pause_remaining_s=0.0,
        )
    delta = m.waypoint - m.position
    dist = float(np.hypot(delta[0], delta[1]))
    travel = m.speed_m_s * dt
    if travel < dist:
        return replace(m, position=m.position + delta * (travel / dist))
    # arrived: leftover slot time counts against the freshly drawn pause
    leftover = dt - (dist / m.speed_m_s if m.speed_m_s > 0 else 0.0)
    pause = float(rng.uniform(0.0, pause_max_s)) if pause_max_s > 0 else 0.0
    if pause > leftover:
        return MobilityState(
            position=m.waypoint.copy(),
            waypoint=m.waypoint.copy(),
            speed_m_s=m.speed_m_s,
            pause_remaining_s=pause - leftover,
        )
    return MobilityState(
        position=m.waypoint.copy(),
        waypoint=draw_waypoint(rng, area_m),
        speed_m_s=draw_speed(rng, speed_bounds),
        pause_remaining_s=0.0,
    )
