import math

import numpy as np
import pytest

from slicesim.baselines import bandwidth_for_rate, rssi_ip_allocate
from slicesim.channel import data_rate_bps
from slicesim.config import ScenarioConfig, SliceSpec, default_config

P_W = 1.0
N0 = 3.981071705534985e-21


def test_bisection_hits_target_rate():
    rng = np.random.default_rng(11)
    for _ in range(200):
        gain = float(10.0 ** rng.uniform(-13, -7))
        target = float(10.0 ** rng.uniform(4, 8))
        bw = bandwidth_for_rate(target, gain, P_W, N0, 40e6)
        if bw is None:
            # unreachable targets must really sit above the rate at the cap
            assert data_rate_bps(1.0, 40e6, gain, P_W, N0) < target
            continue
        got = data_rate_bps(1.0, bw, gain, P_W, N0)
        assert abs(got - target) / target < 1e-6


def test_bisection_unreachable_returns_none():
    # rate saturates at p*g/(n0*ln2) as bw -> inf; ask above the cap's rate
    gain = 1e-12
    cap = 1e6
    cap_rate = data_rate_bps(1.0, cap, gain, P_W, N0)
    assert bandwidth_for_rate(cap_rate * 1.01, gain, P_W, N0, cap) is None
    assert bandwidth_for_rate(cap_rate * 0.5, gain, P_W, N0, cap) is not None


def test_bisection_trivial_targets():
    assert bandwidth_for_rate(0.0, 1e-9, P_W, N0, 1e6) == 0.0
    assert bandwidth_for_rate(-5.0, 1e-9, P_W, N0, 1e6) == 0.0


def test_bisection_monotone_in_target():
    gain = 1e-10
    bws = [bandwidth_for_rate(t, gain, P_W, N0, 100e6) for t in (1e5, 1e6, 5e6)]
    assert all(b is not None for b in bws)
    assert bws[0] < bws[1] < bws[2]


def _freeze_gains(config: ScenarioConfig, rng: np.random.Generator,
                  lo: float = -13, hi: float = -8) -> list[np.ndarray]:
    return [10.0 ** rng.uniform(lo, hi, size=spec.num_users) for spec in config.slice_specs]


def test_rssi_budget_invariants():
    config = default_config()
    rng = np.random.default_rng(7)
    for trial in range(50):
        gains = _freeze_gains(config, rng)
        alloc = rssi_ip_allocate(gains, config)
        assert float(alloc.inter_fractions.sum()) <= 1.0 + 1e-9
        assert np.all(alloc.inter_fractions >= 0.0)
        assert alloc.rounds <= 20
        for s, intra in enumerate(alloc.intra_fractions):
            assert intra.shape == (config.slice_specs[s].num_users,)
            assert np.all(intra >= 0.0)
            if alloc.demand_hz[s] > 0:
                assert abs(float(intra.sum()) - 1.0) < 1e-9


def test_rssi_meets_requirements_when_cell_is_big_enough():
    # strong channels and a light load: every user's need is affordable, so
    # the allocation should deliver at least the requirement to everyone
    config = default_config(
        slice_specs=(
            SliceSpec("a", 3, 1e6, (0.001, 1.0)),
            SliceSpec("b", 4, 2e5, (0.001, 1.0)),
        )
    )
    rng = np.random.default_rng(3)
    gains = _freeze_gains(config, rng, lo=-11, hi=-8)
    alloc = rssi_ip_allocate(gains, config)
    assert not alloc.shortfall
    for s, spec in enumerate(config.slice_specs):
        slice_bw = float(alloc.inter_fractions[s]) * config.total_bandwidth_hz
        rates = data_rate_bps(alloc.intra_fractions[s], slice_bw, gains[s],
                              config.tx_power_w, config.noise_density_w_per_hz)
        assert np.all(rates >= spec.rate_requirement_bps * (1 - 1e-6))


def test_rssi_shortfall_rations_proportionally():
    # demands far beyond the cell: grants must normalize to the full budget,
    # split across slices in proportion to demand
    config = default_config(
        slice_specs=(
            SliceSpec("a", 5, 1e9, (0.001, 1.0)),
            SliceSpec("b", 5, 1e9, (0.001, 1.0)),
        )
    )
    rng = np.random.default_rng(9)
    gains = _freeze_gains(config, rng, lo=-13, hi=-12)
    alloc = rssi_ip_allocate(gains, config)
    assert alloc.shortfall
    assert abs(float(alloc.inter_fractions.sum()) - 1.0) < 1e-9
    expected = alloc.demand_hz / alloc.demand_hz.sum()
    assert np.allclose(alloc.inter_fractions, expected, rtol=1e-9)


def test_rssi_unreachable_user_demands_whole_cell():
    config = default_config(
        slice_specs=(SliceSpec("a", 1, 1e12, (0.001, 1.0)),
                     SliceSpec("b", 1, 1e4, (0.001, 1.0)))
    )
    gains = [np.array([1e-15]), np.array([1e-9])]
    alloc = rssi_ip_allocate(gains, config)
    # the hopeless user is booked at the full cell bandwidth
    assert alloc.demand_hz[0] == config.total_bandwidth_hz
    assert alloc.shortfall


def test_rssi_redistribution_reaches_fixed_point():
    # random instances: after the rounds cap either the pool or unmet
    # demand is (numerically) exhausted, never both left large
    rng = np.random.default_rng(21)
    base = default_config()
    for trial in range(1000):
        counts = tuple(int(rng.integers(1, 6)) for _ in range(3))
        reqs = [float(10.0 ** rng.uniform(3, 7.5)) for _ in range(3)]
        config = default_config(
            slice_specs=tuple(
                SliceSpec(f"s{i}", counts[i], reqs[i], (0.0001, 1.0)) for i in range(3)
            )
        )
        gains = _freeze_gains(config, rng)
        alloc = rssi_ip_allocate(gains, config)
        w = config.total_bandwidth_hz
        granted = float(alloc.inter_fractions.sum()) * w
        unmet = float(alloc.demand_hz.sum()) - granted
        pool = w - granted
        assert granted <= w * (1.0 + 1e-9)
        if not alloc.shortfall:
            # fixed point: leftover pool and unmet demand cannot both exceed tol
            assert pool <= 2e-6 * w or unmet <= 2e-6 * w


def test_rssi_contracted_share_weighting():
    # identical channels, one slice contracts twice the aggregate rate:
    # under scarcity its grant should be capped at twice the share
    config = default_config(
        slice_specs=(
            SliceSpec("big", 4, 1e7, (0.001, 1.0)),
            SliceSpec("small", 2, 1e7, (0.001, 1.0)),
        ),
        total_bandwidth_hz=1e6,  # scarce on purpose
    )
    gains = [np.full(4, 1e-12), np.full(2, 1e-12)]
    alloc = rssi_ip_allocate(gains, config)
    assert alloc.shortfall
    # proportional rationing by demand: 4 identical users vs 2
    assert alloc.inter_fractions[0] == pytest.approx(2 * alloc.inter_fractions[1], rel=1e-9)


def test_rssi_final_grants_invariant_to_contract():
    # the contract caps only the first pass; redistribution hands all slack
    # to unmet demand, so the fixed point does not depend on the weights
    rng = np.random.default_rng(31)
    config = default_config(
        slice_specs=(
            SliceSpec("a", 4, 1e7, (0.001, 1.0)),
            SliceSpec("b", 4, 1e6, (0.001, 1.0)),
        )
    )
    for trial in range(20):
        gains = _freeze_gains(config, rng, lo=-12, hi=-9)
        base = rssi_ip_allocate(gains, config)
        skewed = rssi_ip_allocate(gains, config, contracted_users=(30, 1))
        assert np.allclose(base.inter_fractions, skewed.inter_fractions,
                           rtol=1e-6, atol=1e-9)
        assert base.shortfall == skewed.shortfall
