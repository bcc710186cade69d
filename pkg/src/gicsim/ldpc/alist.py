"""Reading and writing parity-check matrices in the alist text format.

Layout: line 1 ``N M``; line 2 ``max_col_deg max_row_deg``; line 3 the N
column degrees; line 4 the M row degrees; then N lines of 1-based check
indices per variable (zero-padded to max_col_deg) and M lines of 1-based
variable indices per check.  Parsing is token-based, so any whitespace or
line folding is accepted; line numbers are tracked for error messages.
"""

from __future__ import annotations

import numpy as np

from .matrix import LdpcError, ParityCheckMatrix


class AlistError(LdpcError):
    """Malformed alist input, with a 1-based line number when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


class _Tokens:
    def __init__(self, text: str):
        self.items = []
        for lineno, line in enumerate(text.splitlines(), start=1):
            for tok in line.split():
                self.items.append((tok, lineno))
        self.pos = 0

    def next_int(self, what: str) -> tuple[int, int]:
        if self.pos >= len(self.items):
            last = self.items[-1][1] if self.items else 1
            raise AlistError(f"unexpected end of file while reading {what}", last)
        tok, line = self.items[self.pos]
        self.pos += 1
        try:
            return int(tok), line
        except ValueError:
            raise AlistError(f"expected integer for {what}, got {tok!r}", line) from None


def parse_alist(text: str) -> ParityCheckMatrix:
    """Parse alist text into a ParityCheckMatrix (indices converted to 0-based)."""
    toks = _Tokens(text)
    n, line = toks.next_int("N")
    m, _ = toks.next_int("M")
    if n == 0 or m == 0:
        raise AlistError("empty code", line)
    if n < 0 or m < 0:
        raise AlistError("negative dimension", line)
    max_col, _ = toks.next_int("max column degree")
    max_row, _ = toks.next_int("max row degree")
    col_deg = []
    for i in range(n):
        d, line = toks.next_int(f"column degree {i + 1}")
        if d < 0 or d > max_col:
            raise AlistError(f"column degree {d} outside [0, {max_col}]", line)
        col_deg.append(d)
    row_deg = []
    for j in range(m):
        d, line = toks.next_int(f"row degree {j + 1}")
        if d < 1 or d > max_row:
            raise AlistError(f"row degree {d} outside [1, {max_row}]", line)
        row_deg.append(d)

    # Column block: N lines of max_col entries, zeros are padding.
    col_lists = []
    for i in range(n):
        entries = []
        for k in range(max_col):
            v, line = toks.next_int(f"column {i + 1} entry {k + 1}")
            if v < 0 or v > m:
                raise AlistError(f"check index {v} outside [0, {m}]", line)
            if v:
                entries.append(v - 1)
        if len(entries) != col_deg[i]:
            raise AlistError(
                f"column {i + 1}: declared degree {col_deg[i]}, found {len(entries)}",
                line)
        if len(set(entries)) != len(entries):
            raise AlistError(f"column {i + 1}: duplicate check index", line)
        col_lists.append(entries)

    # Row block: authoritative for the edge set; cross-checked against columns.
    row_lists = []
    for j in range(m):
        entries = []
        for k in range(max_row):
            v, line = toks.next_int(f"row {j + 1} entry {k + 1}")
            if v < 0 or v > n:
                raise AlistError(f"variable index {v} outside [0, {n}]", line)
            if v:
                entries.append(v - 1)
        if len(entries) != row_deg[j]:
            raise AlistError(
                f"row {j + 1}: declared degree {row_deg[j]}, found {len(entries)}",
                line)
        if len(set(entries)) != len(entries):
            raise AlistError(f"row {j + 1}: duplicate variable index", line)
        row_lists.append(sorted(entries))

    matrix = ParityCheckMatrix(n, row_lists)
    if not np.array_equal(matrix.var_degrees(), np.asarray(col_deg)):
        raise AlistError("column degrees disagree with the row block", line)
    for i, lst in enumerate(col_lists):
        if not np.array_equal(np.sort(np.asarray(lst, dtype=np.int64)),
                              matrix.var_lists()[i]):
            raise AlistError(f"column {i + 1} entries disagree with the row block",
                             line)
    return matrix


def write_alist(m: ParityCheckMatrix) -> str:
    """Serialize to alist text; re-parsing yields an identical matrix."""
    var_lists = m.var_lists()
    col_deg = m.var_degrees()
    row_deg = m.check_degrees()
    max_col = int(col_deg.max())
    max_row = int(row_deg.max())
    lines = [
        f"{m.n_vars} {m.n_checks}",
        f"{max_col} {max_row}",
        " ".join(str(int(d)) for d in col_deg),
        " ".join(str(int(d)) for d in row_deg),
    ]
    for lst in var_lists:
        padded = [str(int(c) + 1) for c in lst] + ["0"] * (max_col - len(lst))
        lines.append(" ".join(padded))
    for j in range(m.n_checks):
        lst = m.check_list(j)
        padded = [str(int(v) + 1) for v in lst] + ["0"] * (max_row - len(lst))
        lines.append(" ".join(padded))
    return "\n".join(lines) + "\n"
