import math

import numpy as np
import pytest

from slicesim.channel import (
    WORKED_EXAMPLE,
    data_rate_bps,
    linear_gain,
    path_loss_db,
    sample_channel,
)


def test_path_loss_spot_value():
    # hand evaluation: 28 + 22*log10(100) + 20*log10(3)
    assert abs(path_loss_db(100.0, 3.0) - 81.54242509439325) < 1e-9


def test_path_loss_one_metre_is_frequency_term_only():
    assert path_loss_db(1.0, 1.0) == pytest.approx(28.0)


def test_path_loss_distance_slope():
    # +22 dB per decade of distance, +20 dB per decade of frequency
    assert path_loss_db(1000.0, 3.0) - path_loss_db(100.0, 3.0) == pytest.approx(22.0)
    assert path_loss_db(100.0, 30.0) - path_loss_db(100.0, 3.0) == pytest.approx(20.0)


def test_path_loss_rejects_nonpositive_distance():
    with pytest.raises(ValueError):
        path_loss_db(0.0, 3.0)
    with pytest.raises(ValueError):
        path_loss_db(np.array([10.0, -1.0]), 3.0)


def test_shadow_term_adds_linearly():
    base = path_loss_db(50.0, 3.0)
    assert path_loss_db(50.0, 3.0, shadow_db=6.5) == pytest.approx(base + 6.5)


def test_linear_gain_inverts_decibels():
    assert linear_gain(30.0, 1.0) == pytest.approx(1e-3)
    assert linear_gain(30.0, 2.5) == pytest.approx(2.5e-3)


def test_worked_example_matches_independent_evaluation():
    ex = WORKED_EXAMPLE
    # independent recomputation from first principles
    pl = 28.0 + 22.0 * math.log10(ex["distance_m"]) + 20.0 * math.log10(ex["fc_ghz"])
    g = 10.0 ** (-pl / 10.0)
    snr = ex["p_w"] * g / (ex["bandwidth_hz"] * ex["n0_w_hz"])
    rate = ex["bandwidth_hz"] * math.log2(1.0 + snr)
    assert abs(pl - ex["path_loss_db"]) < 1e-9
    assert abs(rate - ex["rate_bps"]) / ex["rate_bps"] < 1e-12

    lib_rate = data_rate_bps(1.0, ex["bandwidth_hz"], linear_gain(pl, 1.0), ex["p_w"], ex["n0_w_hz"])
    assert abs(lib_rate - rate) / rate < 1e-6


def test_zero_fraction_yields_zero_rate():
    assert data_rate_bps(0.0, 1e6, 1e-8, 1.0, 4e-21) == 0.0
    rates = data_rate_bps(np.array([0.0, 0.5]), 1e6, 1e-8, 1.0, 4e-21)
    assert rates[0] == 0.0 and rates[1] > 0


def test_rate_monotone_in_fraction_and_gain():
    f = np.linspace(0.01, 1.0, 50)
    r = data_rate_bps(f, 2e6, 1e-8, 1.0, 4e-21)
    assert np.all(np.diff(r) > 0)
    r_lo = data_rate_bps(0.3, 2e6, 1e-9, 1.0, 4e-21)
    r_hi = data_rate_bps(0.3, 2e6, 1e-8, 1.0, 4e-21)
    assert r_hi > r_lo


def test_rate_broadcasts_over_users():
    gains = np.array([1e-8, 2e-8, 4e-8])
    fracs = np.array([0.2, 0.3, 0.5])
    r = data_rate_bps(fracs, 5e6, gains, 1.0, 4e-21)
    assert r.shape == (3,)
    for i in range(3):
        assert r[i] == pytest.approx(data_rate_bps(float(fracs[i]), 5e6, float(gains[i]), 1.0, 4e-21))


def test_sample_channel_composes_loss_and_fading():
    rng_s = np.random.default_rng(11)
    rng_f = np.random.default_rng(12)
    sample = sample_channel(120.0, 3.0, rng_s, rng_f, shadow_std_db=4.0)
    assert sample.path_loss_db == pytest.approx(
        path_loss_db(120.0, 3.0) + sample.shadow_db
    )
    assert sample.gain == pytest.approx(
        10.0 ** (-sample.path_loss_db / 10.0) * sample.fading_power
    )


def test_sample_channel_statistics():
    # shadowing ~ N(0, 4 dB), fading power ~ Exp(1)
    rng_s = np.random.default_rng(21)
    rng_f = np.random.default_rng(22)
    draws = [sample_channel(100.0, 3.0, rng_s, rng_f) for _ in range(20000)]
    shadows = np.array([d.shadow_db for d in draws])
    fadings = np.array([d.fading_power for d in draws])
    assert abs(shadows.mean()) < 0.1
    assert abs(shadows.std() - 4.0) < 0.1
    assert abs(fadings.mean() - 1.0) < 0.03
    assert abs(fadings.var() - 1.0) < 0.1


def test_zero_shadow_std_disables_shadowing():
    rng_s = np.random.default_rng(31)
    rng_f = np.random.default_rng(32)
    sample = sample_channel(100.0, 3.0, rng_s, rng_f, shadow_std_db=0.0)
    assert sample.shadow_db == 0.0
