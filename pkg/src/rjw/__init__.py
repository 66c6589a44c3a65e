"""Exact computer algebra for 2-local Bockstein spectral sequence computations.

Everything here is exact: arbitrary-precision rationals, explicitly truncated
power series, and integer linear algebra.  No floating point anywhere.
"""

__version__ = "0.1.0"
