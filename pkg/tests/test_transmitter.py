from fractions import Fraction

import numpy as np
import pytest

from gicsim.ldpc import DegreeDistribution, construct_peg, derive_encoder
from gicsim.signaling import BPSK, QPSK, modulate
from gicsim.transmitter import (
    PRIVATE, PUBLIC, PlanError, StreamConfig, UserPlan, hk_transmit,
    power_shares, split_message,
)


@pytest.fixture(scope="module")
def code_n1000():
    return derive_encoder(construct_peg(1000, DegreeDistribution.regular(3, 6), seed=2).matrix)


def public_plan(code, user=1, constellation=BPSK):
    return UserPlan(user, (StreamConfig(user, PUBLIC, code, constellation, 1.0),))


def hk_plan(code, user=1, pu_over_pw=0.16):
    pw, pu = power_shares(pu_over_pw)
    return UserPlan(user, (
        StreamConfig(user, PUBLIC, code, QPSK, pw),
        StreamConfig(user, PRIVATE, code, QPSK, pu),
    ))


class TestSplit:
    def test_single_stream_identity(self, code_n1000):
        plan = public_plan(code_n1000)
        info = np.arange(code_n1000.k, dtype=np.uint8) & 1
        parts = split_message(info, plan)
        assert len(parts) == 1
        assert np.array_equal(parts[0], info)

    def test_two_equal_streams(self, code_n1000):
        plan = hk_plan(code_n1000)
        k = code_n1000.k
        info = np.ones(2 * k, dtype=np.uint8)
        parts = split_message(info, plan)
        assert [p.size for p in parts] == [k, k]
        assert np.array_equal(np.concatenate(parts), info)

    def test_length_mismatch(self, code_n1000):
        with pytest.raises(PlanError):
            split_message(np.zeros(3, dtype=np.uint8), public_plan(code_n1000))


class TestPlanValidation:
    def test_power_shares_must_sum_to_one(self, code_n1000):
        with pytest.raises(PlanError, match="power shares"):
            UserPlan(1, (
                StreamConfig(1, PUBLIC, code_n1000, BPSK, 0.6),
                StreamConfig(1, PRIVATE, code_n1000, BPSK, 0.6),
            ))

    def test_block_lengths_must_agree(self, code_n1000):
        other = derive_encoder(
            construct_peg(500, DegreeDistribution.regular(3, 6), seed=3).matrix)
        with pytest.raises(PlanError, match="block length"):
            UserPlan(1, (
                StreamConfig(1, PUBLIC, code_n1000, BPSK, 0.5),
                StreamConfig(1, PRIVATE, other, BPSK, 0.5),
            ))

    def test_power_share_range(self, code_n1000):
        with pytest.raises(PlanError):
            StreamConfig(1, PUBLIC, code_n1000, BPSK, 0.0)

    def test_labels(self, code_n1000):
        plan = hk_plan(code_n1000, user=2)
        assert [s.label for s in plan.streams] == ["W2", "U2"]


def test_power_shares_scenario_ratio():
    pw, pu = power_shares(0.16)
    assert pw == pytest.approx(0.86206896551724, abs=1e-12)
    assert pu == pytest.approx(0.13793103448275, abs=1e-12)
    assert pw + pu == pytest.approx(1.0, abs=1e-15)


class TestTransmit:
    def test_strong_interference_rate(self, code_n1000):
        plan = public_plan(code_n1000)
        assert plan.user_rate() == Fraction(1, 2)

    def test_hk_rate_pair_two(self, code_n1000):
        plan = hk_plan(code_n1000)
        # two rate-1/2 QPSK streams: 1 + 1 bits per use
        assert plan.user_rate() == 2

    def test_zero_info_is_deterministic_superposition(self, code_n1000):
        plan = hk_plan(code_n1000)
        info = np.zeros(plan.k_total, dtype=np.uint8)
        x, codewords = hk_transmit(info, plan)
        assert all(not c.any() for c in codewords)
        expected = sum(modulate(np.zeros(code_n1000.n, dtype=np.uint8),
                                s.constellation, s.power_share)
                       for s in plan.streams)
        assert np.allclose(x, expected, atol=0)

    def test_unit_average_power(self, code_n1000):
        rng = np.random.default_rng(4)
        plan = hk_plan(code_n1000)
        info = rng.integers(0, 2, plan.k_total).astype(np.uint8)
        x, _ = hk_transmit(info, plan)
        assert abs(np.mean(np.abs(x) ** 2) - 1.0) < 0.05

    def test_deterministic(self, code_n1000):
        plan = hk_plan(code_n1000)
        rng = np.random.default_rng(5)
        info = rng.integers(0, 2, plan.k_total).astype(np.uint8)
        x1, c1 = hk_transmit(info, plan)
        x2, c2 = hk_transmit(info, plan)
        assert np.array_equal(x1, x2)
        assert all(np.array_equal(a, b) for a, b in zip(c1, c2))

    def test_rate_accounting_exactly_rational(self, code_n1000):
        plan = hk_plan(code_n1000)
        expected = sum((Fraction(s.code.k, s.code.n) * s.constellation.bits_per_symbol
                        for s in plan.streams), Fraction(0))
        assert plan.user_rate() == expected
