"""PSK constellations, stream superposition, and exact per-bit LLR demapping."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

MAX_CANDIDATES = 1 << 16


class DemapError(ValueError):
    """Invalid composite model or an infeasible candidate enumeration."""


@dataclass(frozen=True)
class Constellation:
    """Unit-average-power symbol set with its bit labeling.

    ``labels[i]`` is the bit tuple mapped to ``points[i]``; the first label
    bit is the most significant when grouping a bit stream into symbols.
    """

    name: str
    points: tuple
    labels: tuple

    def __post_init__(self):
        power = sum(abs(p) ** 2 for p in self.points) / len(self.points)
        if abs(power - 1.0) > 1e-12:
            raise ValueError(f"{self.name}: mean symbol power {power} != 1")
        if len(self.points) != 2 ** self.bits_per_symbol:
            raise ValueError(f"{self.name}: point count != 2^bits_per_symbol")

    @property
    def bits_per_symbol(self) -> int:
        return len(self.labels[0])

    def points_array(self) -> np.ndarray:
        return np.asarray(self.points, dtype=np.complex128)


# Bit 0 -> +1.  QPSK is Gray-labeled: first bit sets the real sign, second
# the imaginary sign.
BPSK = Constellation("BPSK", (1 + 0j, -1 + 0j), ((0,), (1,)))
_S = 1.0 / math.sqrt(2.0)
QPSK = Constellation(
    "QPSK",
    (_S * (1 + 1j), _S * (1 - 1j), _S * (-1 + 1j), _S * (-1 - 1j)),
    ((0, 0), (0, 1), (1, 0), (1, 1)),
)

CONSTELLATIONS = {"bpsk": BPSK, "qpsk": QPSK}


def modulate(bits, constellation: Constellation, power_share: float = 1.0) -> np.ndarray:
    """Map bits to symbols scaled by sqrt(power_share)."""
    bits = np.asarray(bits, dtype=np.int64)
    b = constellation.bits_per_symbol
    if bits.size % b:
        raise ValueError(f"bit count {bits.size} not divisible by {b}")
    if not power_share > 0:
        raise ValueError("power_share must be positive")
    groups = bits.reshape(-1, b)
    index = np.zeros(groups.shape[0], dtype=np.int64)
    for j in range(b):
        index = (index << 1) | groups[:, j]
    return math.sqrt(power_share) * constellation.points_array()[index]


def hard_bits(symbols, constellation: Constellation, gain: complex = 1.0) -> np.ndarray:
    """Nearest-point decisions, mainly for tests and diagnostics."""
    pts = gain * constellation.points_array()
    idx = np.argmin(np.abs(np.asarray(symbols)[:, None] - pts[None, :]), axis=1)
    return np.asarray([constellation.labels[i] for i in idx], dtype=np.uint8).reshape(-1)


def superimpose(a, b) -> np.ndarray:
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    if a.shape != b.shape:
        raise ValueError(f"length mismatch: {a.shape} vs {b.shape}")
    return a + b


TARGET = "target"
KNOWN = "known"
UNKNOWN = "unknown"


def _isfinite_complex(z) -> bool:
    z = complex(z)
    return math.isfinite(z.real) and math.isfinite(z.imag)


@dataclass(frozen=True, eq=False)
class ComponentStream:
    """One superposed stream as seen by a receiver.

    ``gain`` is the effective complex gain (channel gain times the square
    root of the stream's power share); the constellation itself stays unit
    power.  ``bits`` carries the decoded codeword for KNOWN streams.
    """

    gain: complex
    constellation: Constellation
    state: str
    bits: np.ndarray | None = None

    def __post_init__(self):
        if self.state not in (TARGET, KNOWN, UNKNOWN):
            raise DemapError(f"unknown stream state {self.state!r}")
        if self.state == KNOWN and self.bits is None:
            raise DemapError("known stream needs its decoded bits")
        if not _isfinite_complex(self.gain):
            raise DemapError("effective gain must be finite")


@dataclass(frozen=True, eq=False)
class CompositeSignalModel:
    streams: tuple

    def __post_init__(self):
        object.__setattr__(self, "streams", tuple(self.streams))
        n_targets = sum(1 for s in self.streams if s.state == TARGET)
        if n_targets != 1:
            raise DemapError(f"need exactly one target stream, got {n_targets}")

    @property
    def target(self) -> ComponentStream:
        return next(s for s in self.streams if s.state == TARGET)

    def known_streams(self):
        return [s for s in self.streams if s.state == KNOWN]

    def unknown_streams(self):
        return [s for s in self.streams if s.state == UNKNOWN]


def combo_points(streams) -> np.ndarray:
    """All sums of one scaled constellation point per stream.

    Enumerates the Cartesian product in stream order; a single zero entry
    when the list is empty.
    """
    if not streams:
        return np.zeros(1, dtype=np.complex128)
    grids = [s.gain * s.constellation.points_array() for s in streams]
    total = math.prod(len(g) for g in grids)
    out = np.zeros(total, dtype=np.complex128)
    for i, combo in enumerate(itertools.product(*grids)):
        out[i] = sum(combo)
    return out


def demap_llrs(y, model: CompositeSignalModel, n0: float,
               unknown_as_noise: bool = False) -> np.ndarray:
    """Exact per-bit LLRs for the target stream of a superposition.

    For each target bit, L = log of the ratio between the summed likelihoods
    exp(-|y - s|^2 / n0) of all candidates consistent with bit 0 and with
    bit 1.  Candidates enumerate the target symbol jointly with every
    combination of the unknown streams' symbols (uniform priors); known
    streams contribute a fixed per-symbol offset.  Computed per symbol with
    a stable log-sum-exp; positive LLR favors bit 0.

    ``unknown_as_noise=True`` folds unknown streams into the noise variance
    instead (Gaussian approximation), for comparison runs.
    """
    if n0 <= 0:
        raise DemapError("n0 must be positive")
    y = np.asarray(y, dtype=np.complex128)
    target = model.target
    bps = target.constellation.bits_per_symbol

    fixed = np.zeros_like(y)
    for s in model.known_streams():
        sym = modulate(s.bits, s.constellation, 1.0)
        if sym.size != y.size:
            raise DemapError("known stream bits do not cover the block")
        fixed = fixed + s.gain * sym

    unknowns = model.unknown_streams()
    if unknown_as_noise:
        n0 = n0 + sum(abs(s.gain) ** 2 for s in unknowns)
        unknowns = []

    u = combo_points(unknowns)
    t_points = target.gain * target.constellation.points_array()
    n_cand = t_points.size * u.size
    if n_cand > MAX_CANDIDATES:
        raise DemapError(f"candidate explosion: {n_cand} > {MAX_CANDIDATES} "
                         "combinations per symbol")

    # cand[l, j] = target hypothesis l plus unknown combination j
    cand = (t_points[:, None] + u[None, :]).reshape(-1)
    labels = np.asarray(target.constellation.labels, dtype=np.uint8)
    bit_of_cand = np.repeat(labels, u.size, axis=0)  # (n_cand, bps)

    llrs = np.empty((y.size, bps), dtype=np.float64)
    chunk = max(1, (1 << 21) // n_cand)
    for lo in range(0, y.size, chunk):
        hi = min(lo + chunk, y.size)
        r = y[lo:hi] - fixed[lo:hi]
        d = np.abs(r[:, None] - cand[None, :]) ** 2
        w = -d / n0
        for m in range(bps):
            mask0 = bit_of_cand[:, m] == 0
            llrs[lo:hi, m] = (logsumexp(w[:, mask0], axis=1)
                              - logsumexp(w[:, ~mask0], axis=1))
    return llrs.reshape(-1)
