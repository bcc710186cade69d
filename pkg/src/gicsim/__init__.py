"""LDPC-coded simulation of the two-user Gaussian interference channel."""

__version__ = "0.1.0"
