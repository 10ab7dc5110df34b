"""Isolation bookkeeping: resource flags, reconfiguration cost, validity checks.

After every slot each slice is summarized by two flags.  ``needs_resources``
means the slice cannot serve its unsatisfied users from what it holds:
either nearly all of its bandwidth is already handed out, or the leftover
would not cover the unsatisfied users even at the weakest user's current
share.  ``has_spare`` means every user is satisfied and the slice could
give bandwidth back without breaking its service level.  The two are
mutually exclusive by construction (one requires unsatisfied users, the
other forbids them).

The flags constrain the next inter-slice action: a slice that needs
resources must not shrink, a slice with spare must not grow.  Violations
are reported as stable constraint codes so logs and metrics stay
comparable across versions:

=============  =======================================================
code           meaning
=============  =======================================================
inter-budget   inter-slice fractions exceed the cell budget (sum > 1)
inter-bounds   an inter-slice fraction is outside its bounds
intra-budget   intra-slice fractions exceed the slice budget (sum > 1)
intra-bounds   a per-user fraction is outside its bounds
needy-shrunk   a slice flagged as needing resources was shrunk
spare-grown    a slice flagged as having spare was grown
direction-xor  a changed fraction moved both up and down (unreachable
               for scalar fractions; kept for checker completeness)
=============  =======================================================
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

BUDGET_INTER = "inter-budget"
BOUNDS_INTER = "inter-bounds"
BUDGET_INTRA = "intra-budget"
BOUNDS_INTRA = "intra-bounds"
MUST_NOT_SHRINK = "needy-shrunk"
MUST_NOT_GROW = "spare-grown"
DIRECTION_XOR = "direction-xor"


@dataclass(frozen=True)
class SliceFlags:
    needs_resources: bool
    has_spare: bool


@dataclass(frozen=True)
class SliceSnapshot:
    """What one slice looked like at the end of a slot."""

    rates_bps: np.ndarray
    rate_requirement_bps: float
    intra_fractions: np.ndarray
    gains: np.ndarray
    satisfaction: float
    user_fraction_min: float


def unsatisfied_users(snapshot: SliceSnapshot) -> np.ndarray:
    """Indices of users at or below the slice rate requirement."""
    return np.flatnonzero(snapshot.rates_bps <= snapshot.rate_requirement_bps)


def needs_resources(snapshot: SliceSnapshot) -> bool:
    uns = unsatisfied_users(snapshot)
    if uns.size == 0:
        return False
    residual = 1.0 - float(np.sum(snapshot.intra_fractions))
    if residual <= snapshot.user_fraction_min:
        return True
    # enough residual on paper, but not once the weakest user's appetite
    # is extrapolated over every unsatisfied user
    weakest = int(np.argmin(snapshot.gains))
    return float(snapshot.intra_fractions[weakest]) * uns.size >= residual


def has_spare(snapshot: SliceSnapshot, gamma_th: float) -> bool:
    if unsatisfied_users(snapshot).size > 0:
        return False
    if snapshot.satisfaction < gamma_th:
        return True
    residual = 1.0 - float(np.sum(snapshot.intra_fractions))
    return residual >= snapshot.user_fraction_min


def compute_flags(snapshot: SliceSnapshot, gamma_th: float) -> SliceFlags:
    return SliceFlags(
        needs_resources=needs_resources(snapshot),
        has_spare=has_spare(snapshot, gamma_th),
    )


def slice_recon_cost(gamma_prev: float, gamma_now: float, bw_prev: float, bw_now: float) -> float:
    """Satisfaction lost to a bandwidth change; 0 when unchanged or improved."""
    if bw_now != bw_prev and gamma_now < gamma_prev:
        return gamma_prev - gamma_now
    return 0.0


def total_recon_cost(slice_costs) -> float:
    arr = np.asarray(slice_costs, dtype=float)
    if arr.size == 0:
        raise ValueError("no slices")
    return float(arr.mean())


def objective(gamma_system: float, cost_total: float, alpha: float) -> float:
    """Satisfaction/reconfiguration trade-off the allocators maximize."""
    return alpha * gamma_system - (1.0 - alpha) * cost_total


def validate_inter_action(
    fractions,
    needs_prev,
    spare_prev,
    fractions_prev,
    bounds: tuple[float, float],
    *,
    enforce_isolation: bool = True,
) -> list[str]:
    """Constraint codes violated by an inter-slice action (empty list = valid).

    ``needs_prev``/``spare_prev`` are the flags published for the previous
    slot; the direction checks only apply to slices whose fraction actually
    changed, so a carried-over allocation is always directionally clean.
    """
    f = np.asarray(fractions, dtype=float)
    f_prev = np.asarray(fractions_prev, dtype=float)
    needs = np.asarray(needs_prev, dtype=bool)
    spare = np.asarray(spare_prev, dtype=bool)
    lo, hi = bounds
    violations: list[str] = []
    if float(np.sum(f)) > 1.0:
        violations.append(BUDGET_INTER)
    if enforce_isolation and bool(np.any((f < lo) | (f > hi))):
        violations.append(BOUNDS_INTER)
    grew = f >= f_prev
    shrank = f <= f_prev
    if enforce_isolation:
        if bool(np.any(needs & ~grew)):
            violations.append(MUST_NOT_SHRINK)
        if bool(np.any(spare & ~shrank)):
            violations.append(MUST_NOT_GROW)
    changed = f != f_prev
    if bool(np.any(changed & ~((f > f_prev) ^ (f < f_prev)))):
        violations.append(DIRECTION_XOR)
    return violations


def validate_intra_action(
    fractions,
    user_bounds: tuple[float, float],
    *,
    enforce_isolation: bool = True,
) -> list[str]:
    """Constraint codes violated by one slice's per-user action."""
    f = np.asarray(fractions, dtype=float)
    lo, hi = user_bounds
    violations: list[str] = []
    if float(np.sum(f)) > 1.0:
        violations.append(BUDGET_INTRA)
    if enforce_isolation and bool(np.any((f < lo) | (f > hi))):
        violations.append(BOUNDS_INTRA)
    return violations
