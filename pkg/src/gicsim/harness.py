"""Seeded Monte Carlo BER experiments over the full transmit/SIC pipeline."""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .channel import ChannelConfig, apply_gic
from .receiver import ReceiverPlan, sic_decode
from .transmitter import UserPlan, hk_transmit, split_message


@dataclass(eq=False)
class Scenario:
    """Everything one BER experiment needs, replayable from the seed.

    Per block b, the substream default_rng([seed, b]) is consumed in a fixed
    order: user 1 info bits, user 2 info bits, then the channel noise (z1
    before z2).  Results are therefore independent of worker count.
    """

    name: str
    cfg: ChannelConfig
    plans: dict
    receiver_plans: dict
    target_bits: int = 10_000_000
    min_error_events: int = 50
    seed: int = 0
    noise: bool = True

    def __post_init__(self):
        lengths = {plan.n_symbols for plan in self.plans.values()}
        if len(lengths) != 1:
            raise ValueError(f"user plans disagree on block length: {sorted(lengths)}")
        if self.target_bits < 1:
            raise ValueError("target_bits must be positive")

    @property
    def k_total(self) -> int:
        return sum(plan.k_total for plan in self.plans.values())

    def budget_blocks(self) -> int:
        return math.ceil(self.target_bits / self.k_total)


@dataclass
class StreamBer:
    receiver: int
    label: str
    role: str
    errors: int
    bits: int

    @property
    def ber(self) -> float:
        return self.errors / self.bits if self.bits else 0.0

    def wilson_interval(self, z: float = 1.959963984540054):
        """95% Wilson score interval for the bit error probability."""
        n = self.bits
        if n == 0:
            return (0.0, 1.0)
        p = self.errors / n
        z2 = z * z
        center = (p + z2 / (2 * n)) / (1 + z2 / n)
        half = z * math.sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / (1 + z2 / n)
        return (max(center - half, 0.0), min(center + half, 1.0))


@dataclass
class BerReport:
    scenario: str
    seed: int
    blocks: int
    entries: list = field(default_factory=list)
    wall_seconds: float = 0.0

    def entry(self, receiver: int, label: str) -> StreamBer:
        for e in self.entries:
            if e.receiver == receiver and e.label == label:
                return e
        raise KeyError((receiver, label))

    def to_csv(self) -> str:
        lines = ["scenario,receiver,stream,role,bits,errors,ber,ci_low,ci_high,blocks,seed"]
        for e in self.entries:
            lo, hi = e.wilson_interval()
            lines.append(
                f"{self.scenario},{e.receiver},{e.label},{e.role},{e.bits},"
                f"{e.errors},{e.ber:.12g},{lo:.12g},{hi:.12g},{self.blocks},{self.seed}")
        return "\n".join(lines) + "\n"


def merge_reports(a: BerReport, b: BerReport) -> BerReport:
    """Combine two runs over disjoint block ranges of the same scenario."""
    if (a.scenario, a.seed) != (b.scenario, b.seed):
        raise ValueError("reports come from different scenarios")
    merged = BerReport(a.scenario, a.seed, a.blocks + b.blocks,
                       wall_seconds=a.wall_seconds + b.wall_seconds)
    keys = [(e.receiver, e.label) for e in a.entries]
    for rx, label in keys:
        ea = a.entry(rx, label)
        eb = b.entry(rx, label)
        merged.entries.append(StreamBer(rx, label, ea.role,
                                        ea.errors + eb.errors, ea.bits + eb.bits))
    return merged


def simulate_block(scenario: Scenario, block_index: int) -> dict:
    """One block end to end; returns {(receiver, label): (errors, bits)}."""
    rng = np.random.default_rng([scenario.seed, block_index])
    infos = {}
    truth = {}
    blocks = {}
    for u in (1, 2):
        plan = scenario.plans[u]
        infos[u] = rng.integers(0, 2, plan.k_total).astype(np.uint8)
        for s, part in zip(plan.streams, split_message(infos[u], plan)):
            truth[s.label] = part
        blocks[u], _ = hk_transmit(infos[u], plan)
    y1, y2 = apply_gic(blocks[1], blocks[2], scenario.cfg, rng,
                       noise=scenario.noise)
    received = {1: y1, 2: y2}
    counts = {}
    for receiver, rplan in sorted(scenario.receiver_plans.items()):
        report = sic_decode(received[receiver], rplan, scenario.cfg)
        for label, entry in report.final().items():
            part = truth[label]
            errors = int(np.sum(entry.info_bits != part))
            counts[(receiver, label, entry.role)] = (errors, part.size)
    return counts


def _run_range(scenario: Scenario, lo: int, hi: int) -> dict:
    totals: dict = {}
    for b in range(lo, hi):
        for key, (errors, bits) in simulate_block(scenario, b).items():
            e0, b0 = totals.get(key, (0, 0))
            totals[key] = (e0 + errors, b0 + bits)
    return totals


_WORKER_SCENARIO = None


def _init_worker(scenario):
    global _WORKER_SCENARIO
    _WORKER_SCENARIO = scenario


def _worker_run(args) -> dict:
    lo, hi = args
    return _run_range(_WORKER_SCENARIO, lo, hi)


def run_ber_range(scenario: Scenario, lo: int, hi: int, workers: int = 1) -> BerReport:
    """BER over blocks [lo, hi); the building block of run_ber and merges."""
    t0 = time.monotonic()
    if workers <= 1 or hi - lo <= 1:
        totals = _run_range(scenario, lo, hi)
    else:
        chunk = max(1, math.ceil((hi - lo) / (workers * 4)))
        ranges = [(a, min(a + chunk, hi)) for a in range(lo, hi, chunk)]
        totals = {}
        with ProcessPoolExecutor(max_workers=workers, initializer=_init_worker,
                                 initargs=(scenario,)) as pool:
            for part in pool.map(_worker_run, ranges):
                for key, (errors, bits) in part.items():
                    e0, b0 = totals.get(key, (0, 0))
                    totals[key] = (e0 + errors, b0 + bits)
    report = BerReport(scenario.name, scenario.seed, hi - lo)
    for (receiver, label, role) in sorted(totals):
        errors, bits = totals[(receiver, label, role)]
        report.entries.append(StreamBer(receiver, label, role, errors, bits))
    report.wall_seconds = time.monotonic() - t0
    return report


def run_ber(scenario: Scenario, workers: int = 1) -> BerReport:
    """Run the block budget, extending until every stream has at least
    ``min_error_events`` errors or four budgets have been spent."""
    budget = scenario.budget_blocks()
    report = run_ber_range(scenario, 0, budget, workers)
    step = max(1, math.ceil(budget / 4))
    while (scenario.min_error_events > 0
           and report.blocks < 4 * budget
           and any(e.errors < scenario.min_error_events for e in report.entries)):
        lo = report.blocks
        hi = min(lo + step, 4 * budget)
        report = merge_reports(report, run_ber_range(scenario, lo, hi, workers))
    return report


@dataclass
class ReliabilityVerdict:
    receiver: int
    label: str
    ber: float
    threshold: float
    achieved: bool
    borderline: bool
    upper_bound: float


def reliability_check(report: BerReport, threshold: float = 1e-4):
    """Point-estimate verdicts against the reliability threshold.

    ``achieved`` compares the point estimate; streams within 2x of the
    threshold are flagged borderline instead of failed outright, and the
    Wilson upper bound is always reported alongside.
    """
    verdicts = []
    for e in report.entries:
        _, hi = e.wilson_interval()
        achieved = e.ber <= threshold
        borderline = (not achieved) and e.ber <= 2.0 * threshold
        verdicts.append(ReliabilityVerdict(e.receiver, e.label, e.ber,
                                           threshold, achieved, borderline, hi))
    return verdicts
