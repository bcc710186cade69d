"""Flooding-schedule sum-product decoding on the Tanner graph."""

from __future__ import annotations

import numpy as np

from .code import LdpcCode
from .matrix import LdpcError

CLAMP = 30.0          # message / LLR magnitude cap, natural-log units
_TANH_FLOOR = 1e-300  # keeps log|tanh| finite for zero messages


class BpResult:
    __slots__ = ("bits", "iterations", "converged", "info_bits")

    def __init__(self, bits, iterations, converged, info_bits):
        self.bits = bits
        self.iterations = iterations
        self.converged = converged
        self.info_bits = info_bits


def decode_bp(code: LdpcCode, channel_llrs, max_iters: int = 100) -> BpResult:
    """Sum-product decode; positive LLR means bit 0 is more likely.

    Check updates use the tanh product rule with log-magnitude/sign
    bookkeeping; all messages are clamped to +-CLAMP.  The decoder stops
    early once the hard decision has zero syndrome AND repeats the previous
    iteration's decision: flooding can pass through a transient wrong
    codeword on its first swing (strong saturated inputs on short loopy
    graphs), and the stability requirement rejects exactly those transients.
    An identically-zero posterior (degenerate inputs) never counts as
    convergence.  Hard-decision ties (posterior exactly 0) give bit 0.
    """
    matrix = code.matrix
    llr = np.asarray(channel_llrs, dtype=np.float64)
    if llr.size != matrix.n_vars:
        raise LdpcError(f"LLR length {llr.size} != n_vars {matrix.n_vars}")
    if max_iters < 1:
        raise LdpcError("max_iters must be >= 1")

    ev = matrix.chk_vars
    ptr = matrix.chk_ptr
    chk_of_edge = np.repeat(np.arange(matrix.n_checks), matrix.check_degrees())
    llr = np.clip(llr, -CLAMP, CLAMP)
    msg = llr[ev]

    bits = (llr < 0).astype(np.uint8)
    prev_bits = bits
    converged = False
    it = 0
    for it in range(1, max_iters + 1):
        t = np.tanh(msg / 2.0)
        mag = np.log(np.maximum(np.abs(t), _TANH_FLOOR))
        neg = t < 0
        chk_mag = np.add.reduceat(mag, ptr[:-1])
        chk_neg = np.add.reduceat(neg.astype(np.int64), ptr[:-1])
        ext_mag = np.exp(np.minimum(chk_mag[chk_of_edge] - mag, 0.0))
        ext_sign = 1.0 - 2.0 * ((chk_neg[chk_of_edge] - neg) & 1)
        ext = ext_sign * 2.0 * np.arctanh(np.minimum(ext_mag, 1.0 - 1e-16))
        ext = np.clip(ext, -CLAMP, CLAMP)

        posterior = llr + np.bincount(ev, weights=ext, minlength=matrix.n_vars)
        bits = (posterior < 0).astype(np.uint8)
        if np.array_equal(bits, prev_bits) and posterior.any():
            par = np.bincount(chk_of_edge, weights=bits[ev].astype(np.float64),
                              minlength=matrix.n_checks)
            if not (par.astype(np.int64) & 1).any():
                converged = True
                break
        prev_bits = bits
        msg = np.clip(posterior[ev] - ext, -CLAMP, CLAMP)

    return BpResult(bits, it, converged, bits[code.info_positions])
