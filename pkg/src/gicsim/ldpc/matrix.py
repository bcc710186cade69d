"""Sparse GF(2) parity-check matrices, degree distributions, syndromes."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class LdpcError(ValueError):
    """Malformed code data or an infeasible construction request."""


class ParityCheckMatrix:
    """Binary parity-check matrix stored as per-check sorted variable lists.

    Edges live in CSR-like arrays: ``chk_ptr[j]:chk_ptr[j+1]`` delimits the
    sorted slice of ``chk_vars`` holding the 0-based variable indices of
    check ``j``.  Instances are immutable after construction.
    """

    __slots__ = ("n_vars", "n_checks", "chk_ptr", "chk_vars")

    def __init__(self, n_vars: int, check_lists):
        if n_vars < 1:
            raise LdpcError("empty code: n_vars must be >= 1")
        if len(check_lists) < 1:
            raise LdpcError("empty code: need at least one check")
        ptr = np.zeros(len(check_lists) + 1, dtype=np.int64)
        flat = []
        for j, lst in enumerate(check_lists):
            arr = np.asarray(lst, dtype=np.int64)
            if arr.size == 0:
                raise LdpcError(f"check {j} has degree 0")
            if arr.min() < 0 or arr.max() >= n_vars:
                raise LdpcError(f"check {j}: variable index out of range")
            if np.any(np.diff(arr) <= 0):
                arr = np.unique(arr)
                if arr.size != len(lst):
                    raise LdpcError(f"check {j}: duplicate edge")
            flat.append(arr)
            ptr[j + 1] = ptr[j] + arr.size
        self.n_vars = int(n_vars)
        self.n_checks = len(check_lists)
        self.chk_ptr = ptr
        self.chk_vars = np.concatenate(flat)
        self.chk_ptr.flags.writeable = False
        self.chk_vars.flags.writeable = False

    @property
    def n_edges(self) -> int:
        return int(self.chk_vars.size)

    def check_list(self, j: int) -> np.ndarray:
        return self.chk_vars[self.chk_ptr[j]:self.chk_ptr[j + 1]]

    def check_degrees(self) -> np.ndarray:
        return np.diff(self.chk_ptr)

    def var_degrees(self) -> np.ndarray:
        return np.bincount(self.chk_vars, minlength=self.n_vars)

    def var_lists(self) -> list[np.ndarray]:
        """Per-variable sorted check lists (derived view of the edges)."""
        chk_of_edge = np.repeat(np.arange(self.n_checks), self.check_degrees())
        order = np.argsort(self.chk_vars, kind="stable")
        svars = self.chk_vars[order]
        schks = chk_of_edge[order]
        bounds = np.searchsorted(svars, np.arange(self.n_vars + 1))
        return [np.sort(schks[bounds[v]:bounds[v + 1]]) for v in range(self.n_vars)]

    def toarray(self) -> np.ndarray:
        """Dense uint8 form; intended for small codes and tests."""
        h = np.zeros((self.n_checks, self.n_vars), dtype=np.uint8)
        chk_of_edge = np.repeat(np.arange(self.n_checks), self.check_degrees())
        h[chk_of_edge, self.chk_vars] = 1
        return h

    def __eq__(self, other) -> bool:
        if not isinstance(other, ParityCheckMatrix):
            return NotImplemented
        return (
            self.n_vars == other.n_vars
            and self.n_checks == other.n_checks
            and np.array_equal(self.chk_ptr, other.chk_ptr)
            and np.array_equal(self.chk_vars, other.chk_vars)
        )

    def __repr__(self) -> str:
        return (
            f"ParityCheckMatrix(n_vars={self.n_vars}, n_checks={self.n_checks},"
            f" n_edges={self.n_edges})"
        )


def from_dense(h) -> ParityCheckMatrix:
    h = np.asarray(h)
    return ParityCheckMatrix(h.shape[1], [np.flatnonzero(row) for row in h])


def syndrome(m: ParityCheckMatrix, word) -> np.ndarray:
    """Parity of ``word`` over every check's neighborhood, as a 0/1 vector."""
    word = np.asarray(word)
    if word.size != m.n_vars:
        raise LdpcError(f"word length {word.size} != n_vars {m.n_vars}")
    chk_of_edge = np.repeat(np.arange(m.n_checks), m.check_degrees())
    sums = np.bincount(chk_of_edge, weights=word[m.chk_vars].astype(np.float64),
                       minlength=m.n_checks)
    return (sums.astype(np.int64) & 1).astype(np.uint8)


def _largest_remainder(fractions, total: int) -> dict[int, int]:
    """Apportion ``total`` items to degree classes by largest remainder.

    Ties are broken deterministically: larger remainder first, then smaller
    degree.
    """
    quotas = [(d, f * total) for d, f in fractions]
    counts = {d: int(np.floor(q)) for d, q in quotas}
    leftover = total - sum(counts.values())
    rema = sorted(quotas, key=lambda df: (-(df[1] - np.floor(df[1])), df[0]))
    for d, _ in rema[:leftover]:
        counts[d] += 1
    return counts


@dataclass(frozen=True)
class DegreeDistribution:
    """Node-perspective degree fractions for the two sides of the graph.

    ``var_fractions`` / ``chk_fractions`` are sequences of (degree, fraction)
    pairs; fractions on each side must sum to 1 within 1e-9.
    """

    var_fractions: tuple
    chk_fractions: tuple

    def __post_init__(self):
        object.__setattr__(self, "var_fractions",
                           tuple((int(d), float(f)) for d, f in self.var_fractions))
        object.__setattr__(self, "chk_fractions",
                           tuple((int(d), float(f)) for d, f in self.chk_fractions))
        for side, pairs, dmin in (("variable", self.var_fractions, 1),
                                  ("check", self.chk_fractions, 2)):
            if not pairs:
                raise LdpcError(f"{side} side: empty distribution")
            degs = [d for d, _ in pairs]
            if len(set(degs)) != len(degs):
                raise LdpcError(f"{side} side: repeated degree")
            for d, f in pairs:
                if d < dmin:
                    raise LdpcError(f"{side} side: degree {d} < {dmin}")
                if f < 0:
                    raise LdpcError(f"{side} side: negative fraction")
            s = sum(f for _, f in pairs)
            if abs(s - 1.0) > 1e-9:
                raise LdpcError(f"{side} side: fractions sum to {s}, not 1")

    @classmethod
    def regular(cls, var_degree: int, chk_degree: int) -> "DegreeDistribution":
        return cls(((var_degree, 1.0),), ((chk_degree, 1.0),))

    def design_rate(self) -> float:
        dv = sum(d * f for d, f in self.var_fractions)
        dc = sum(d * f for d, f in self.chk_fractions)
        return 1.0 - dv / dc

    def realize(self, n_vars: int):
        """Round the distribution onto ``n_vars`` variables.

        Returns (var_degree_per_node, chk_degree_per_node) as sorted int
        arrays whose edge totals agree exactly; raises LdpcError when the
        rounded sides cannot absorb each other's edges.
        """
        if n_vars < 2:
            raise LdpcError("n_vars must be >= 2")
        var_counts = _largest_remainder(self.var_fractions, n_vars)
        n_edges = sum(d * c for d, c in var_counts.items())
        if n_edges == 0:
            raise LdpcError("distribution yields no edges")
        dc_avg = sum(d * f for d, f in self.chk_fractions)
        n_checks = int(np.floor(n_edges / dc_avg + 0.5))
        if n_checks < 1:
            raise LdpcError("distribution yields no checks")
        chk_counts = _largest_remainder(self.chk_fractions, n_checks)
        chk_edges = sum(d * c for d, c in chk_counts.items())
        if chk_edges != n_edges:
            raise LdpcError(
                f"infeasible distribution: {n_edges} variable-side edges vs "
                f"{chk_edges} check-side edges after rounding")
        var_deg = np.sort(np.repeat([d for d in sorted(var_counts)],
                                    [var_counts[d] for d in sorted(var_counts)]))
        chk_deg = np.sort(np.repeat([d for d in sorted(chk_counts)],
                                    [chk_counts[d] for d in sorted(chk_counts)]))
        return var_deg, chk_deg
