"""Causal fermionic evolution on discrete spacetime lattices.

Exact Fock-space machinery, the local-decomposition theorem for causal
unitaries, Jordan-Wigner compilation to local qubit circuits with Majorana
locality repair, and discrete Dirac/Weyl models with quantitative
continuum-limit checks.
"""

from .lattice import (
    Lattice,
    Mode,
    ModeKind,
    Ordering,
    Region,
    chain,
    grid,
    row_major_ordering,
)
from .symbolic import SymbolicOperator

__all__ = [
    "Lattice",
    "Mode",
    "ModeKind",
    "Ordering",
    "Region",
    "SymbolicOperator",
    "chain",
    "grid",
    "row_major_ordering",
]

__version__ = "0.1.0"
