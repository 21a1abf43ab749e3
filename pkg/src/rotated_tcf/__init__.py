"""Exact-arithmetic toolkit for rotated-measurement LWE protocols.

Implements a two-round interactive quantumness test, blind single-qubit
remote state preparation, and a 1-of-2 puzzle with threshold repetition,
together with an exact classical simulation of the honest quantum device.
"""

__version__ = "0.1.0"
