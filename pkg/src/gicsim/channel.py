"""Two-user complex-baseband Gaussian interference channel."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ChannelConfig:
    """Fixed complex gains h_ij (user i to receiver j), noise level, powers."""

    h11: complex
    h12: complex
    h21: complex
    h22: complex
    n0: float = 1.0
    p1: float = 1.0
    p2: float = 1.0

    def __post_init__(self):
        if not (self.n0 > 0):
            raise ValueError("n0 must be positive")
        if not (self.p1 > 0 and self.p2 > 0):
            raise ValueError("powers must be positive")
        for name in ("h11", "h12", "h21", "h22"):
            if not cmath.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")

    def gain(self, user: int, receiver: int) -> complex:
        return getattr(self, f"h{user}{receiver}")

    def power(self, user: int) -> float:
        return self.p1 if user == 1 else self.p2


@dataclass(frozen=True)
class LinkMetrics:
    snr1: float
    snr2: float
    inr1: float
    inr2: float

    def db(self, value: float) -> float:
        return 10.0 * math.log10(value) if value > 0 else -math.inf

    def as_dict(self) -> dict:
        d = {"snr1": self.snr1, "snr2": self.snr2, "inr1": self.inr1, "inr2": self.inr2}
        d.update({f"{k}_db": self.db(v) for k, v in list(d.items())})
        return d

    def strong_interference(self) -> bool:
        return self.inr1 > self.snr1 and self.inr2 > self.snr2


def link_metrics(cfg: ChannelConfig) -> LinkMetrics:
    """SNR_i = |h_ii|^2 p_i / n0 and INR_i = |h_ji|^2 p_j / n0."""
    return LinkMetrics(
        snr1=abs(cfg.h11) ** 2 * cfg.p1 / cfg.n0,
        snr2=abs(cfg.h22) ** 2 * cfg.p2 / cfg.n0,
        inr1=abs(cfg.h21) ** 2 * cfg.p2 / cfg.n0,
        inr2=abs(cfg.h12) ** 2 * cfg.p1 / cfg.n0,
    )


def apply_gic(x1, x2, cfg: ChannelConfig, rng: np.random.Generator,
              noise: bool = True):
    """Superpose the two transmit blocks at both receivers and add noise.

    y1 = h11 x1 + h21 x2 + z1 and y2 = h12 x1 + h22 x2 + z2, with z1, z2
    i.i.d. circularly symmetric complex Gaussian of total variance n0.
    Noise draws come from ``rng`` in a fixed order: z1 real parts, z1
    imaginary parts, then the same for z2.  ``noise=False`` gives the
    noiseless limit without consuming any draws.
    """
    x1 = np.asarray(x1, dtype=np.complex128)
    x2 = np.asarray(x2, dtype=np.complex128)
    if x1.shape != x2.shape:
        raise ValueError(f"length mismatch: {x1.shape} vs {x2.shape}")
    y1 = cfg.h11 * x1 + cfg.h21 * x2
    y2 = cfg.h12 * x1 + cfg.h22 * x2
    if noise:
        sigma = math.sqrt(cfg.n0 / 2.0)
        n = x1.size
        y1 = y1 + sigma * (rng.standard_normal(n) + 1j * rng.standard_normal(n))
        y2 = y2 + sigma * (rng.standard_normal(n) + 1j * rng.standard_normal(n))
    return y1, y2


def gain_from_polar(magnitude: float, phase_degrees: float) -> complex:
    return magnitude * cmath.exp(1j * math.radians(phase_degrees))
