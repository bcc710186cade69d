"""Per-user superposition encoding chain: split, encode, modulate, add."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .ldpc import LdpcCode
from .signaling import Constellation, modulate, superimpose

PUBLIC = "public"
PRIVATE = "private"


class PlanError(ValueError):
    """Inconsistent stream plan."""


@dataclass(frozen=True, eq=False)
class StreamConfig:
    user: int
    role: str
    code: LdpcCode
    constellation: Constellation
    power_share: float

    def __post_init__(self):
        if self.user not in (1, 2):
            raise PlanError(f"user must be 1 or 2, got {self.user}")
        if self.role not in (PUBLIC, PRIVATE):
            raise PlanError(f"role must be public or private, got {self.role!r}")
        if not 0.0 < self.power_share <= 1.0:
            raise PlanError(f"power_share {self.power_share} outside (0, 1]")
        if self.code.n % self.constellation.bits_per_symbol:
            raise PlanError("code length not divisible by bits per symbol")

    @property
    def label(self) -> str:
        return ("W" if self.role == PUBLIC else "U") + str(self.user)

    @property
    def n_symbols(self) -> int:
        return self.code.n // self.constellation.bits_per_symbol


@dataclass(frozen=True, eq=False)
class UserPlan:
    """The ordered streams one user superimposes onto the channel."""

    user: int
    streams: tuple

    def __post_init__(self):
        object.__setattr__(self, "streams", tuple(self.streams))
        if not self.streams:
            raise PlanError("plan needs at least one stream")
        if any(s.user != self.user for s in self.streams):
            raise PlanError("stream user indices disagree with the plan")
        roles = [s.role for s in self.streams]
        if len(set(roles)) != len(roles):
            raise PlanError("at most one stream per role")
        total = sum(s.power_share for s in self.streams)
        if abs(total - 1.0) > 1e-12:
            raise PlanError(f"power shares sum to {total}, not 1")
        if len(self.streams) > 1 and any(
                s.role == PRIVATE and s.power_share == 1.0 for s in self.streams):
            raise PlanError("private stream cannot hold the full power budget "
                            "alongside a public stream")
        lengths = {s.n_symbols for s in self.streams}
        if len(lengths) != 1:
            raise PlanError(f"streams disagree on block length: {sorted(lengths)}")

    @property
    def n_symbols(self) -> int:
        return self.streams[0].n_symbols

    @property
    def k_total(self) -> int:
        return sum(s.code.k for s in self.streams)

    def user_rate(self) -> Fraction:
        """Information bits per channel use, exact."""
        return sum(
            (s.code.rate * s.constellation.bits_per_symbol for s in self.streams),
            Fraction(0),
        )

    def stream(self, role: str) -> StreamConfig:
        for s in self.streams:
            if s.role == role:
                return s
        raise KeyError(role)


def power_shares(pu_over_pw: float) -> tuple[float, float]:
    """(public, private) shares from the private-to-public power ratio."""
    if pu_over_pw < 0:
        raise PlanError("power ratio must be nonnegative")
    return 1.0 / (1.0 + pu_over_pw), pu_over_pw / (1.0 + pu_over_pw)


def split_message(info, plan: UserPlan) -> list[np.ndarray]:
    """Contiguous partition of the message in declared stream order."""
    info = np.asarray(info, dtype=np.uint8)
    if info.size != plan.k_total:
        raise PlanError(f"message length {info.size} != k_total {plan.k_total}")
    parts = []
    at = 0
    for s in plan.streams:
        parts.append(info[at:at + s.code.k])
        at += s.code.k
    return parts


def hk_transmit(info, plan: UserPlan):
    """Encode and superimpose all of one user's streams.

    Returns (x, codewords): the transmitted block of ``plan.n_symbols``
    complex samples with unit average power, and the per-stream codewords
    in declared order for later scoring.
    """
    parts = split_message(info, plan)
    x = np.zeros(plan.n_symbols, dtype=np.complex128)
    codewords = []
    for s, u in zip(plan.streams, parts):
        c = s.code.encode(u)
        codewords.append(c)
        x = superimpose(x, modulate(c, s.constellation, s.power_share))
    return x, codewords
