import numpy as np
import pytest

from gicsim.ldpc import DegreeDistribution, construct_peg, derive_encoder, from_dense

# Hamming(7,4): column i+1 is the binary expansion of i+1.
HAMMING_H = np.array(
    [[1, 0, 1, 0, 1, 0, 1],
     [0, 1, 1, 0, 0, 1, 1],
     [0, 0, 0, 1, 1, 1, 1]], dtype=np.uint8)


@pytest.fixture(scope="session")
def hamming_code():
    return derive_encoder(from_dense(HAMMING_H))


@pytest.fixture(scope="session")
def hamming_codewords(hamming_code):
    words = []
    for u in range(16):
        info = np.array([(u >> i) & 1 for i in range(4)], dtype=np.uint8)
        words.append(hamming_code.encode(info))
    return words


@pytest.fixture(scope="session")
def small_peg_code():
    """(3,6)-regular rate-1/2 code, n=1000, shared across tests."""
    return derive_encoder(construct_peg(1000, DegreeDistribution.regular(3, 6), seed=11).matrix)
