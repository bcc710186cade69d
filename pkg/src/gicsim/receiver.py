"""Successive interference cancellation with single-user BP decoders."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import ChannelConfig
from .ldpc import decode_bp
from .signaling import (
    KNOWN, TARGET, UNKNOWN, ComponentStream, CompositeSignalModel, demap_llrs,
    modulate,
)
from .transmitter import PUBLIC, PlanError, StreamConfig, UserPlan


@dataclass(frozen=True, eq=False)
class ReceiverStream:
    """A stream as it arrives at one receiver: config plus effective gain."""

    stream: StreamConfig
    gain: complex

    @property
    def label(self) -> str:
        return self.stream.label


@dataclass(frozen=True, eq=False)
class ReceiverPlan:
    """What one receiver decodes, in which order, and how hard it tries.

    ``decodable`` holds the receiver's own streams plus the other user's
    public stream; ``never_decoded`` the other user's private stream, which
    is only ever marginalized.  ``order`` is None for automatic strongest-
    first ordering or an explicit tuple of stream labels.
    """

    receiver: int
    decodable: tuple
    never_decoded: tuple
    order: tuple | None = None
    outer_iterations: int = 2
    max_bp_iters: int = 100

    def __post_init__(self):
        if self.receiver not in (1, 2):
            raise PlanError("receiver must be 1 or 2")
        if self.outer_iterations < 1:
            raise PlanError("outer_iterations must be >= 1")
        for rs in self.decodable:
            own = rs.stream.user == self.receiver
            if not own and rs.stream.role != PUBLIC:
                raise PlanError(
                    f"{rs.label}: the other user's private stream is not decodable")
        for rs in self.never_decoded:
            if rs.stream.user == self.receiver or rs.stream.role == PUBLIC:
                raise PlanError(f"{rs.label}: must be decoded, not marginalized")
        if self.order is not None:
            labels = sorted(rs.label for rs in self.decodable)
            if sorted(self.order) != labels:
                raise PlanError(
                    f"explicit order {self.order} does not cover streams {labels}")


def build_receiver_plan(receiver: int, plans: dict, cfg: ChannelConfig,
                        order=None, outer_iterations: int = 2,
                        max_bp_iters: int = 100) -> ReceiverPlan:
    """Assemble a ReceiverPlan from the two user plans and the channel."""
    decodable = []
    never = []
    for user, plan in sorted(plans.items()):
        for s in plan.streams:
            gain = cfg.gain(user, receiver) * np.sqrt(
                s.power_share * cfg.power(user))
            rs = ReceiverStream(s, complex(gain))
            if user == receiver or s.role == PUBLIC:
                decodable.append(rs)
            else:
                never.append(rs)
    return ReceiverPlan(receiver, tuple(decodable), tuple(never),
                        None if order in (None, "auto") else tuple(order),
                        outer_iterations, max_bp_iters)


def plan_order(plan: ReceiverPlan, cfg: ChannelConfig) -> list:
    """Greedy strongest-first ordering by effective SINR.

    At each step the stream with the largest |g|^2 over (n0 + power of all
    not-yet-placed decodable streams + never-decoded streams) is placed and
    removed from the interference set.  Ties break by user index, then
    public before private.
    """
    never_power = sum(abs(rs.gain) ** 2 for rs in plan.never_decoded)
    remaining = list(plan.decodable)
    ordered = []
    while remaining:
        def rank(rs):
            interf = sum(abs(t.gain) ** 2 for t in remaining if t is not rs)
            sinr = abs(rs.gain) ** 2 / (cfg.n0 + interf + never_power)
            return (-sinr, rs.stream.user, 0 if rs.stream.role == PUBLIC else 1)
        best = min(remaining, key=rank)
        ordered.append(best)
        remaining.remove(best)
    return ordered


def cancel(y, decoded_bits, stream: StreamConfig, effective_gain: complex) -> np.ndarray:
    """Subtract the re-modulated hard decisions from the received block."""
    y = np.asarray(y, dtype=np.complex128)
    sym = modulate(decoded_bits, stream.constellation, 1.0)
    if sym.size != y.size:
        raise PlanError(f"codeword covers {sym.size} symbols, block has {y.size}")
    return y - effective_gain * sym


@dataclass(eq=False)
class StreamResult:
    label: str
    user: int
    role: str
    pass_index: int
    info_bits: np.ndarray
    codeword: np.ndarray
    converged: bool
    bp_iterations: int
    residual_power: float


@dataclass(eq=False)
class SicReport:
    receiver: int
    order: tuple
    entries: list

    def final(self) -> dict:
        """Last result per stream label."""
        out = {}
        for e in self.entries:
            out[e.label] = e
        return out


def sic_decode(y, plan: ReceiverPlan, cfg: ChannelConfig,
               genie: dict | None = None) -> SicReport:
    """Demap, decode, and cancel every decodable stream in order.

    Pass 1 marks already-decoded streams as known and everything else as
    unknown (marginalized).  Later passes re-run the chain with all other
    streams' latest hard decisions treated as known.  Cancellation always
    uses the hard re-modulated codeword, converged or not.  ``genie``
    optionally maps stream labels to true codewords used for cancellation
    only (diagnostic; the decoder's own output is still reported).
    """
    y = np.asarray(y, dtype=np.complex128)
    ordered = plan_order(plan, cfg) if plan.order is None else [
        next(rs for rs in plan.decodable if rs.label == lab) for lab in plan.order]

    latest: dict = {}  # label -> codeword bits used for cancellation
    entries = []
    for pass_index in range(1, plan.outer_iterations + 1):
        for rs in ordered:
            components = [ComponentStream(rs.gain, rs.stream.constellation, TARGET)]
            for other in ordered:
                if other is rs:
                    continue
                bits = latest.get(other.label)
                if bits is None:
                    components.append(ComponentStream(
                        other.gain, other.stream.constellation, UNKNOWN))
                else:
                    components.append(ComponentStream(
                        other.gain, other.stream.constellation, KNOWN, bits=bits))
            for never in plan.never_decoded:
                components.append(ComponentStream(
                    never.gain, never.stream.constellation, UNKNOWN))
            llrs = demap_llrs(y, CompositeSignalModel(tuple(components)), cfg.n0)
            decoded = decode_bp(rs.stream.code, llrs, plan.max_bp_iters)
            cancel_bits = decoded.bits
            if genie and rs.label in genie:
                cancel_bits = np.asarray(genie[rs.label], dtype=np.uint8)
            latest[rs.label] = cancel_bits

            residual = y.copy()
            for other in ordered:
                bits = latest.get(other.label)
                if bits is not None:
                    residual = cancel(residual, bits, other.stream, other.gain)
            result = StreamResult(
                label=rs.label, user=rs.stream.user, role=rs.stream.role,
                pass_index=pass_index, info_bits=decoded.info_bits,
                codeword=decoded.bits, converged=decoded.converged,
                bp_iterations=decoded.iterations,
                residual_power=float(np.mean(np.abs(residual) ** 2)),
            )
            entries.append(result)
    return SicReport(plan.receiver, tuple(rs.label for rs in ordered), entries)
