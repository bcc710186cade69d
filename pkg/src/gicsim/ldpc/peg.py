"""Progressive edge growth construction of LDPC parity-check matrices."""

from __future__ import annotations

import numpy as np

from .matrix import DegreeDistribution, LdpcError, ParityCheckMatrix


class PegResult:
    """Constructed matrix plus the shortest cycle closed during growth."""

    __slots__ = ("matrix", "girth")

    def __init__(self, matrix: ParityCheckMatrix, girth: int | None):
        self.matrix = matrix
        self.girth = girth  # None means the graph is cycle-free


def construct_peg(n_vars: int, dist: DegreeDistribution, seed: int) -> PegResult:
    """Grow a Tanner graph realizing ``dist`` exactly, maximizing local girth.

    Variables are processed in ascending degree order.  For each new edge a
    BFS from the variable finds the set of checks not yet reachable; the new
    edge goes to a minimum-degree check among them (ties broken by the seeded
    generator).  When every check with remaining capacity is reachable, the
    deepest reachable one is used instead, which closes a cycle; the shortest
    such cycle is reported as the girth.  Deterministic given (n_vars, dist,
    seed).
    """
    var_deg, chk_target = dist.realize(n_vars)
    n_checks = chk_target.size
    n_edges = int(var_deg.sum())
    rng = np.random.default_rng(np.random.SeedSequence(seed))

    evar = np.empty(n_edges, dtype=np.int64)
    echk = np.empty(n_edges, dtype=np.int64)
    n_placed = 0
    chk_deg = np.zeros(n_checks, dtype=np.int64)
    girth = None

    order = np.argsort(var_deg, kind="stable")
    for v in order:
        for _ in range(var_deg[v]):
            cap = chk_deg < chk_target
            reached, level = _bfs_checks(v, evar[:n_placed], echk[:n_placed],
                                         n_vars, n_checks)
            unreached = cap & ~reached
            if unreached.any():
                cand = np.flatnonzero(unreached)
            else:
                if not cap.any():
                    raise LdpcError("infeasible distribution: ran out of "
                                    "check capacity during growth")
                deepest = level[cap].max()
                cand = np.flatnonzero(cap & (level == deepest))
                cycle = 2 * (int(deepest) + 1)
                girth = cycle if girth is None else min(girth, cycle)
            cand = cand[chk_deg[cand] == chk_deg[cand].min()]
            c = int(cand[rng.integers(len(cand))]) if len(cand) > 1 else int(cand[0])
            evar[n_placed] = v
            echk[n_placed] = c
            n_placed += 1
            chk_deg[c] += 1

    order = np.lexsort((evar, echk))
    evar, echk = evar[order], echk[order]
    bounds = np.searchsorted(echk, np.arange(n_checks + 1))
    check_lists = [evar[bounds[j]:bounds[j + 1]] for j in range(n_checks)]
    return PegResult(ParityCheckMatrix(n_vars, check_lists), girth)


def _bfs_checks(v, evar, echk, n_vars, n_checks):
    """Breadth-first expansion from variable ``v`` over the current edges.

    Returns (reached, level): reached[c] marks checks with a path from v,
    level[c] is the check-depth at which c first appears (0 for v's own
    checks); -1 where unreached.
    """
    reached_v = np.zeros(n_vars, dtype=bool)
    reached_c = np.zeros(n_checks, dtype=bool)
    level = np.full(n_checks, -1, dtype=np.int64)
    reached_v[v] = True
    depth = 0
    while True:
        new_c = np.zeros(n_checks, dtype=bool)
        new_c[echk[reached_v[evar]]] = True
        new_c &= ~reached_c
        if not new_c.any():
            break
        reached_c |= new_c
        level[new_c] = depth
        if reached_c.all():
            break
        prev = reached_v.copy()
        reached_v[evar[reached_c[echk]]] = True
        if np.array_equal(prev, reached_v):
            break
        depth += 1
    return reached_c, level
