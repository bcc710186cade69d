import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gicsim.ldpc import AlistError, ParityCheckMatrix, from_dense, parse_alist, write_alist

from conftest import HAMMING_H


def test_hamming_round_trip():
    m = from_dense(HAMMING_H)
    text = write_alist(m)
    assert parse_alist(text) == m
    assert m.n_vars == 7 and m.n_checks == 3 and m.n_edges == 12


def test_hamming_header_line_two():
    text = write_alist(from_dense(HAMMING_H))
    assert text.splitlines()[1] == "3 4"


def test_single_edge_matrix_is_six_lines():
    m = ParityCheckMatrix(1, [[0]])
    text = write_alist(m)
    assert len(text.splitlines()) == 6
    assert parse_alist(text) == m


def test_empty_code_rejected():
    with pytest.raises(AlistError, match="empty code"):
        parse_alist("0 3\n1 1\n")


def test_index_out_of_range_reports_line():
    bad = "2 1\n1 2\n1 1\n2\n1\n1\n1 9\n"
    with pytest.raises(AlistError, match="line 7"):
        parse_alist(bad)


def test_degree_mismatch_reported():
    # Column 1 declares degree 2 but lists a single entry.
    bad = "2 2\n2 1\n2 1\n1 1\n1 0\n1 0\n1\n1\n"
    with pytest.raises(AlistError, match="degree"):
        parse_alist(bad)


def test_truncated_file():
    good = write_alist(from_dense(HAMMING_H))
    with pytest.raises(AlistError, match="end of file"):
        parse_alist(good[: len(good) // 2])


def _random_matrix(seed, n=100, m=50):
    rng = np.random.default_rng(seed)
    h = np.zeros((m, n), dtype=np.uint8)
    for j in range(m):
        deg = rng.integers(1, 7)
        h[j, rng.choice(n, size=deg, replace=False)] = 1
    return from_dense(h)


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=0, max_value=10_000))
def test_round_trip_random_sparse(seed):
    m = _random_matrix(seed)
    assert parse_alist(write_alist(m)) == m


@settings(max_examples=10, deadline=None)
@given(st.integers(min_value=0, max_value=10_000))
def test_write_parse_write_idempotent(seed):
    text = write_alist(_random_matrix(seed))
    assert write_alist(parse_alist(text)) == text


def test_whitespace_and_folding_tolerated():
    m = from_dense(HAMMING_H)
    text = write_alist(m).replace("\n", " \n ", 3)
    folded = text.replace("\n", "\n\n", 2)
    assert parse_alist(folded) == m
