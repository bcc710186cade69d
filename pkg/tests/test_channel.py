import cmath
import math

import numpy as np
import pytest

from gicsim.channel import ChannelConfig, apply_gic, gain_from_polar, link_metrics

J45 = cmath.exp(1j * math.pi / 4)


def symmetric_cfg(direct, cross, n0=1.0):
    return ChannelConfig(h11=direct * J45, h12=cross * J45,
                         h21=cross * J45, h22=direct * J45, n0=n0)


def test_noise_off_is_exact():
    cfg = symmetric_cfg(1.16, 2.11)
    rng = np.random.default_rng(0)
    x1 = np.array([1 + 0j, -1, 1])
    x2 = np.array([-1 + 0j, -1, 1])
    y1, y2 = apply_gic(x1, x2, cfg, rng, noise=False)
    assert np.allclose(y1, cfg.h11 * x1 + cfg.h21 * x2, atol=0, rtol=0)
    assert np.allclose(y2, cfg.h12 * x1 + cfg.h22 * x2, atol=0, rtol=0)


def test_noise_variance():
    cfg = symmetric_cfg(1.0, 1.0, n0=1.0)
    rng = np.random.default_rng(123)
    n = 100_000
    zeros = np.zeros(n, dtype=complex)
    y1, _ = apply_gic(zeros, zeros, cfg, rng)
    var = np.mean(np.abs(y1) ** 2)
    # |z|^2 is Exp(n0): std error of the mean is n0/sqrt(n)
    assert abs(var - 1.0) < 3.0 / math.sqrt(n)
    # real/imag split evenly
    assert abs(np.mean(y1.real ** 2) - 0.5) < 3.0 * 0.5 * math.sqrt(2.0 / n)


def test_zero_cross_gain_is_single_user_awgn():
    cfg = ChannelConfig(h11=1.0, h12=0.0, h21=0.0, h22=1.0, n0=1.0)
    rng = np.random.default_rng(1)
    x1 = np.ones(10, dtype=complex)
    x2 = 7.0 * np.ones(10, dtype=complex)
    y1, _ = apply_gic(x1, x2, cfg, rng, noise=False)
    assert np.allclose(y1, x1)


def test_length_mismatch():
    cfg = symmetric_cfg(1.0, 1.0)
    with pytest.raises(ValueError, match="length mismatch"):
        apply_gic(np.zeros(3), np.zeros(4), cfg, np.random.default_rng(0))


def test_metrics_table_one_row_half():
    cfg = symmetric_cfg(1.16, 2.11)
    m = link_metrics(cfg)
    assert m.snr1 == pytest.approx(1.3456, abs=1e-12)
    assert m.inr1 == pytest.approx(4.4521, abs=1e-12)
    assert m.snr1 == m.snr2 and m.inr1 == m.inr2
    assert m.strong_interference()


def test_metrics_general_interference_gains():
    m = link_metrics(symmetric_cfg(14.11, 5.75))
    assert m.snr1 == pytest.approx(199.0921, abs=1e-10)
    assert m.inr1 == pytest.approx(33.0625, abs=1e-10)
    assert m.snr1 > m.inr1
    assert not m.strong_interference()


def test_metrics_unit():
    m = link_metrics(ChannelConfig(h11=1j, h12=-1.0, h21=1.0, h22=-1j))
    assert m.snr1 == m.snr2 == m.inr1 == m.inr2 == 1.0
    assert m.db(1.0) == 0.0


def test_strong_interference_classification_all_rows():
    # strong-interference rows from both PSK tables; general-interference gains violate
    for direct, cross in [(0.35, 0.44), (1.16, 2.11), (0.58, 0.82), (1.25, 2.35)]:
        assert link_metrics(symmetric_cfg(direct, cross)).strong_interference()
    assert not link_metrics(symmetric_cfg(14.11, 5.75)).strong_interference()


def test_reproducible_given_seed():
    cfg = symmetric_cfg(1.16, 2.11)
    x1 = np.ones(64, dtype=complex)
    x2 = -np.ones(64, dtype=complex)
    a = apply_gic(x1, x2, cfg, np.random.default_rng([9, 3]))
    b = apply_gic(x1, x2, cfg, np.random.default_rng([9, 3]))
    assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])


def test_output_power_accounting():
    cfg = symmetric_cfg(1.16, 2.11)
    rng = np.random.default_rng(77)
    n = 100_000
    # unit-power i.i.d. QPSK-like inputs
    x1 = (rng.choice([-1, 1], n) + 1j * rng.choice([-1, 1], n)) / math.sqrt(2)
    x2 = (rng.choice([-1, 1], n) + 1j * rng.choice([-1, 1], n)) / math.sqrt(2)
    y1, _ = apply_gic(x1, x2, cfg, rng)
    expected = abs(cfg.h11) ** 2 + abs(cfg.h21) ** 2 + cfg.n0
    got = np.mean(np.abs(y1) ** 2)
    # |y|^2 has std about expected; 3 standard errors
    assert abs(got - expected) < 3.0 * expected / math.sqrt(n)


def test_invalid_configs():
    with pytest.raises(ValueError):
        ChannelConfig(h11=1, h12=1, h21=1, h22=1, n0=0.0)
    with pytest.raises(ValueError):
        ChannelConfig(h11=1, h12=1, h21=1, h22=1, p1=0.0)
    with pytest.raises(ValueError):
        ChannelConfig(h11=complex("inf"), h12=1, h21=1, h22=1)


def test_gain_from_polar():
    g = gain_from_polar(2.11, 45.0)
    assert g == pytest.approx(2.11 * J45)
