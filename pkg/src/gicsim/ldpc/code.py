"""Systematic encoders derived from parity-check matrices via GF(2) elimination."""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .matrix import LdpcError, ParityCheckMatrix


def _pack_rows(matrix: ParityCheckMatrix) -> np.ndarray:
    """Bit-pack H into (n_checks, n_bytes) uint8, big-endian bits per byte."""
    n_bytes = (matrix.n_vars + 7) // 8
    packed = np.zeros((matrix.n_checks, n_bytes), dtype=np.uint8)
    row = np.zeros(matrix.n_vars, dtype=np.uint8)
    for j in range(matrix.n_checks):
        row[:] = 0
        row[matrix.check_list(j)] = 1
        packed[j] = np.packbits(row)
    return packed


def _as_words(packed8: np.ndarray) -> np.ndarray:
    """uint64 view of packed rows, padding the row width to 8-byte multiples."""
    m, b = packed8.shape
    bw = ((b + 7) // 8) * 8
    buf = np.zeros((m, bw), dtype=np.uint8)
    buf[:, :b] = packed8
    return buf.view(np.uint64)


def _get_col(packed8: np.ndarray, col: int) -> np.ndarray:
    return (packed8[:, col >> 3] >> (7 - (col & 7))) & 1


class LdpcCode:
    """A parity-check matrix with its systematic encoder.

    ``info_positions`` (the non-pivot columns of the reduced matrix) carry the
    message; the pivot columns are filled from a dense packed generator for
    the parity part.  Every encoded word has zero syndrome, including for
    rank-deficient matrices, where k grows to n - rank.
    """

    def __init__(self, matrix: ParityCheckMatrix, rank: int,
                 info_positions: np.ndarray, parity_positions: np.ndarray,
                 gen_words: np.ndarray):
        self.matrix = matrix
        self.rank = rank
        self.k = matrix.n_vars - rank
        self.rate = Fraction(self.k, matrix.n_vars)
        self.info_positions = info_positions
        self.parity_positions = parity_positions
        self._gen_words = gen_words

    @property
    def n(self) -> int:
        return self.matrix.n_vars

    def encode(self, info) -> np.ndarray:
        info = np.asarray(info, dtype=np.uint8)
        if info.size != self.k:
            raise LdpcError(f"info length {info.size} != k {self.k}")
        word = np.zeros(self.n, dtype=np.uint8)
        word[self.info_positions] = info
        if self.rank and self.k:
            u8 = np.zeros(self._gen_words.shape[1] * 8, dtype=np.uint8)
            u8[: (self.k + 7) // 8] = np.packbits(info)
            u_words = u8.view(np.uint64)
            acc = np.bitwise_xor.reduce(self._gen_words & u_words, axis=1)
            parity = np.unpackbits(acc.view(np.uint8)).reshape(self.rank, 64)
            word[self.parity_positions] = (parity.sum(axis=1) & 1).astype(np.uint8)
        return word

    def extract_info(self, word) -> np.ndarray:
        return np.asarray(word, dtype=np.uint8)[self.info_positions]

    def __repr__(self) -> str:
        return f"LdpcCode(n={self.n}, k={self.k}, rate={self.rate})"


def derive_encoder(matrix: ParityCheckMatrix) -> LdpcCode:
    """Reduce H over GF(2) and build the systematic encoder."""
    words = _as_words(_pack_rows(matrix))
    packed8 = words.view(np.uint8)
    n = matrix.n_vars
    m = matrix.n_checks

    rank = 0
    pivot_cols = []
    for col in range(n):
        bits = _get_col(packed8[rank:], col)
        nz = np.flatnonzero(bits)
        if nz.size == 0:
            continue
        p = rank + int(nz[0])
        if p != rank:
            words[[rank, p]] = words[[p, rank]]
        others = np.flatnonzero(_get_col(packed8, col))
        others = others[others != rank]
        if others.size:
            words[others] ^= words[rank]
        pivot_cols.append(col)
        rank += 1
        if rank == m:
            break

    pivot_cols = np.asarray(pivot_cols, dtype=np.int64)
    mask = np.ones(n, dtype=bool)
    mask[pivot_cols] = False
    free_cols = np.flatnonzero(mask)

    # Generator for the parity part: row i is the free-column combination
    # feeding pivot column i.
    k = free_cols.size
    kb = (k + 7) // 8
    gen8 = np.zeros((rank, ((kb + 7) // 8) * 8), dtype=np.uint8)
    for i in range(rank):
        row_bits = np.unpackbits(packed8[i])[:n]
        if k:
            gen8[i, :kb] = np.packbits(row_bits[free_cols])
    gen_words = gen8.view(np.uint64)
    return LdpcCode(matrix, rank, free_cols, pivot_cols, gen_words)


def encode(code: LdpcCode, info) -> np.ndarray:
    return code.encode(info)
