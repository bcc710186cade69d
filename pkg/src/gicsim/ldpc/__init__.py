"""LDPC codes: matrices, alist I/O, PEG construction, encoding, BP decoding."""

from .alist import AlistError, parse_alist, write_alist
from .bp import CLAMP, BpResult, decode_bp
from .code import LdpcCode, derive_encoder, encode
from .matrix import DegreeDistribution, LdpcError, ParityCheckMatrix, from_dense, syndrome
from .peg import PegResult, construct_peg

__all__ = [
    "AlistError", "BpResult", "CLAMP", "DegreeDistribution", "LdpcCode",
    "LdpcError", "ParityCheckMatrix", "PegResult", "construct_peg",
    "decode_bp", "derive_encoder", "encode", "from_dense", "parse_alist",
    "syndrome", "write_alist",
]
