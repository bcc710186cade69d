import cmath
import math

import numpy as np
import pytest

from gicsim.signaling import (
    BPSK, KNOWN, QPSK, TARGET, UNKNOWN, ComponentStream, CompositeSignalModel,
    DemapError, combo_points, demap_llrs, hard_bits, modulate, superimpose,
)


class TestModulate:
    def test_bpsk_labeling(self):
        assert np.allclose(modulate([0, 1], BPSK, 1.0), [1.0, -1.0])

    def test_qpsk_scaled(self):
        assert np.allclose(modulate([0, 0], QPSK, 2.0), [1 + 1j])

    def test_qpsk_gray_labels(self):
        got = modulate([0, 0, 0, 1, 1, 0, 1, 1], QPSK, 1.0)
        s = 1 / math.sqrt(2)
        assert np.allclose(got, [s * (1 + 1j), s * (1 - 1j), s * (-1 + 1j), s * (-1 - 1j)])

    def test_balanced_block_power_exact(self):
        bits = np.tile([0, 0, 0, 1, 1, 0, 1, 1], 16)
        sym = modulate(bits, QPSK, 0.37)
        assert np.mean(np.abs(sym) ** 2) == pytest.approx(0.37, abs=1e-15)

    def test_length_not_divisible(self):
        with pytest.raises(ValueError, match="divisible"):
            modulate([0, 1, 0], QPSK, 1.0)

    def test_unit_power_constellations(self):
        for c in (BPSK, QPSK):
            assert np.mean(np.abs(c.points_array()) ** 2) == pytest.approx(1.0, abs=1e-12)


class TestSuperimpose:
    def test_zero_identity(self):
        a = np.array([1 + 2j, -3j])
        assert np.array_equal(superimpose(a, np.zeros(2)), a)

    def test_complex_sum(self):
        a = modulate([0], BPSK, 1.0)
        b = modulate([0, 0], QPSK, 0.4)[:1]
        assert np.allclose(superimpose(a, b), a + b)

    def test_mismatch(self):
        with pytest.raises(ValueError):
            superimpose(np.zeros(2), np.zeros(3))

    def test_power_additivity(self):
        rng = np.random.default_rng(8)
        n = 100_000
        a = modulate(rng.integers(0, 2, n), BPSK, 1.0)
        b = modulate(rng.integers(0, 2, 2 * n), QPSK, 1.0)
        p = np.mean(np.abs(superimpose(a, b)) ** 2)
        assert abs(p - 2.0) < 3 * 2.0 / math.sqrt(n)


def single_target(gain, constellation=BPSK, extra=()):
    streams = [ComponentStream(gain, constellation, TARGET)]
    streams.extend(extra)
    return CompositeSignalModel(tuple(streams))


class TestDemap:
    def test_closed_form_bpsk(self):
        # interference-free BPSK: L = 4 Re(g* y) / n0 with g the effective gain
        rng = np.random.default_rng(2)
        n0 = 0.8
        g = 1.3 * cmath.exp(1j * 0.4)
        y = rng.normal(size=10_000) + 1j * rng.normal(size=10_000)
        llrs = demap_llrs(y, single_target(g), n0)
        expected = 4.0 * (np.conj(g) * y).real / n0
        assert np.max(np.abs(llrs - expected)) < 1e-9

    def test_equidistant_gives_zero(self):
        y = np.array([0.0 + 0.7j])
        llrs = demap_llrs(y, single_target(1.0 + 0j), 1.0)
        assert llrs[0] == pytest.approx(0.0, abs=1e-12)

    def test_brute_force_with_unknown_interferer(self):
        rng = np.random.default_rng(3)
        n0 = 0.5
        g_t = 1.1 * cmath.exp(1j * math.pi / 4)
        g_i = 2.2 * cmath.exp(1j * math.pi / 4)
        y = 2.0 * (rng.normal(size=10_000) + 1j * rng.normal(size=10_000))
        model = single_target(g_t, BPSK, [ComponentStream(g_i, BPSK, UNKNOWN)])
        llrs = demap_llrs(y, model, n0)
        # independent four-term oracle over all (target, interferer) sign pairs
        num = np.zeros(y.size)
        den = np.zeros(y.size)
        for si in (+1.0, -1.0):
            num += np.exp(-np.abs(y - g_t - g_i * si) ** 2 / n0)
            den += np.exp(-np.abs(y + g_t - g_i * si) ** 2 / n0)
        expected = np.log(num) - np.log(den)
        assert np.max(np.abs(llrs - expected)) < 1e-9

    def test_known_stream_is_subtracted(self):
        bits = np.array([0, 1, 1, 0], dtype=np.uint8)
        g_k = 2.0 + 0.5j
        known = ComponentStream(g_k, BPSK, KNOWN, bits=bits)
        y = g_k * modulate(bits, BPSK, 1.0) + np.array([0.3, -0.2, 0.1, 0.4])
        llrs = demap_llrs(y, single_target(1.0 + 0j, BPSK, [known]), 1.0)
        clean = demap_llrs(y - g_k * modulate(bits, BPSK, 1.0),
                           single_target(1.0 + 0j), 1.0)
        assert np.allclose(llrs, clean, atol=1e-12)

    def test_phase_equivariance(self):
        rng = np.random.default_rng(5)
        y = rng.normal(size=256) + 1j * rng.normal(size=256)
        rot = cmath.exp(1j * 1.234)
        model = single_target(1.2, QPSK, [ComponentStream(0.7j, QPSK, UNKNOWN)])
        model_rot = single_target(1.2 * rot, QPSK,
                                  [ComponentStream(0.7j * rot, QPSK, UNKNOWN)])
        a = demap_llrs(y, model, 0.9)
        b = demap_llrs(rot * y, model_rot, 0.9)
        assert np.allclose(a, b, atol=1e-9)

    def test_noise_scale_invariance(self):
        rng = np.random.default_rng(6)
        y = rng.normal(size=128) + 1j * rng.normal(size=128)
        alpha = 3.7
        model = single_target(0.9, BPSK, [ComponentStream(1.4, BPSK, UNKNOWN)])
        scaled = single_target(0.9 * math.sqrt(alpha), BPSK,
                               [ComponentStream(1.4 * math.sqrt(alpha), BPSK, UNKNOWN)])
        a = demap_llrs(y, model, 1.0)
        b = demap_llrs(math.sqrt(alpha) * y, scaled, alpha)
        assert np.allclose(a, b, atol=1e-9)

    def test_qpsk_interference_free_decomposes(self):
        rng = np.random.default_rng(7)
        g = 1.5 * cmath.exp(1j * math.pi / 4)
        y = rng.normal(size=2048) + 1j * rng.normal(size=2048)
        llrs = demap_llrs(y, single_target(g, QPSK), 1.0).reshape(-1, 2)
        z = np.conj(g) * y
        s = abs(g) / math.sqrt(2)
        assert np.allclose(llrs[:, 0], 4 * s * z.real / abs(g) / 1.0, atol=1e-9)
        assert np.allclose(llrs[:, 1], 4 * s * z.imag / abs(g) / 1.0, atol=1e-9)

    def test_known_vs_marginalized_hard_decisions_at_high_snr(self):
        rng = np.random.default_rng(11)
        n = 10_000
        g_t, g_i = 10.0, 14.0  # both streams at >= 20 dB
        b_i = rng.integers(0, 2, n).astype(np.uint8)
        b_t = rng.integers(0, 2, n).astype(np.uint8)
        y = (g_t * modulate(b_t, BPSK, 1.0) + g_i * modulate(b_i, BPSK, 1.0)
             + math.sqrt(0.5) * (rng.normal(size=n) + 1j * rng.normal(size=n)))
        known = demap_llrs(y, single_target(g_t, BPSK,
                           [ComponentStream(g_i, BPSK, KNOWN, bits=b_i)]), 1.0)
        marg = demap_llrs(y, single_target(g_t, BPSK,
                          [ComponentStream(g_i, BPSK, UNKNOWN)]), 1.0)
        both = (np.abs(known) > 0) & (np.abs(marg) > 0)
        assert np.array_equal(known[both] < 0, marg[both] < 0)

    def test_gaussian_approximation_toggle(self):
        rng = np.random.default_rng(13)
        y = rng.normal(size=64) + 1j * rng.normal(size=64)
        g_i = 0.9
        model = single_target(1.0, BPSK, [ComponentStream(g_i, BPSK, UNKNOWN)])
        approx = demap_llrs(y, model, 1.0, unknown_as_noise=True)
        clean = demap_llrs(y, single_target(1.0), 1.0 + g_i ** 2)
        assert np.allclose(approx, clean, atol=1e-12)

    def test_model_validation(self):
        with pytest.raises(DemapError, match="target"):
            CompositeSignalModel((ComponentStream(1.0, BPSK, UNKNOWN),))
        with pytest.raises(DemapError, match="bits"):
            ComponentStream(1.0, BPSK, KNOWN)
        with pytest.raises(DemapError, match="n0"):
            demap_llrs(np.zeros(1), single_target(1.0), 0.0)

    def test_candidate_explosion_guard(self):
        extras = [ComponentStream(1.0, QPSK, UNKNOWN) for _ in range(8)]
        model = single_target(1.0, QPSK, extras)
        with pytest.raises(DemapError, match="candidate explosion"):
            demap_llrs(np.zeros(4), model, 1.0)


def test_combo_points_empty_and_order():
    assert np.array_equal(combo_points([]), [0j])
    c = combo_points([ComponentStream(1.0, BPSK, UNKNOWN),
                      ComponentStream(10.0, BPSK, UNKNOWN)])
    assert np.allclose(c, [11.0, -9.0, 9.0, -11.0])


def test_hard_bits_round_trip():
    rng = np.random.default_rng(1)
    bits = rng.integers(0, 2, 64).astype(np.uint8)
    assert np.array_equal(hard_bits(modulate(bits, QPSK, 1.0), QPSK), bits)
