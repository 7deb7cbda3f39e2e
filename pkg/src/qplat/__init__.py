"""Exact-arithmetic toolkit for quasi-permutation lattice classification.

The package decides whether intermediate lattices of root data (the
character lattices of semisimple group data) are quasi-permutation, and
emits machine-verifiable positive or negative certificates.
"""

from .intmat import IntMatrix, SmithForm, HermiteForm, snf, hnf, kernel_basis, cokernel_invariants

__all__ = [
    "IntMatrix",
    "SmithForm",
    "HermiteForm",
    "snf",
    "hnf",
    "kernel_basis",
    "cokernel_invariants",
]

__version__ = "0.1.0"
