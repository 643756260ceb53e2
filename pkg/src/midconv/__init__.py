"""Middle convolution of matrix tuples and constructive Riemann-Hilbert solving."""

__version__ = "0.1.0"
