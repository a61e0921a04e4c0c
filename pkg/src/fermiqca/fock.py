"""Occupation-number-basis representation of fermionic modes.

States are complex vectors of length 2^N indexed by occupation bitstrings:
bit k of the basis index is the occupation of the mode at ordering position
k (bit 0 least significant). Operators are scipy sparse matrices or dense
arrays over this basis; entries of ladder operators are exact integers, so
anticommutator checks carry zero rounding error.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np
import scipy.sparse as sp

from . import _config
from ._kernels import ladder_table, permutation_fock
from .lattice import Mode, Ordering
from .symbolic import SymbolicOperator


class FockSizeError(RuntimeError):
    """Raised when a dense Fock-space build exceeds the configured cap."""


def check_size(n_modes: int):
    cap = _config.max_modes()
    if n_modes > cap:
        raise FockSizeError(
            f"{n_modes} modes exceeds the dense cap of {cap} "
            "(override with FERMIQCA_MAX_MODES)"
        )


@lru_cache(maxsize=512)
def _ladder_sparse(n: int, pos: int, create: bool) -> sp.csr_matrix:
    rows, cols, signs = ladder_table(n, pos, create)
    dim = 1 << n
    return sp.csr_matrix(
        (signs.astype(np.complex128), (rows, cols)), shape=(dim, dim)
    )


def creation_matrix(mode: Mode, ordering: Ordering) -> sp.csr_matrix:
    """a^dag_mode in the occupation basis, with the Jordan-Wigner sign
    (-1)^(number of occupied modes below pi(mode)) on each flip."""
    check_size(ordering.n_modes)
    return _ladder_sparse(ordering.n_modes, ordering.position(mode), True)


def annihilation_matrix(mode: Mode, ordering: Ordering) -> sp.csr_matrix:
    check_size(ordering.n_modes)
    return _ladder_sparse(ordering.n_modes, ordering.position(mode), False)


def vacuum(ordering: Ordering) -> np.ndarray:
    """|Omega>: amplitude 1 on the all-zeros bitstring."""
    check_size(ordering.n_modes)
    psi = np.zeros(1 << ordering.n_modes, dtype=np.complex128)
    psi[0] = 1.0
    return psi


def basis_state(occupied: tuple[int, ...], n_modes: int) -> np.ndarray:
    """Product state a^dag_{q1} ... a^dag_{qk} |Omega> with q1 < ... < qk."""
    psi = np.zeros(1 << n_modes, dtype=np.complex128)
    idx = 0
    for q in occupied:
        idx |= 1 << q
    psi[idx] = 1.0
    return psi


def lower(symbolic: SymbolicOperator, ordering: Ordering) -> sp.csr_matrix:
    """Matrix of a symbolic operator; monomial factors multiply in written order."""
    check_size(ordering.n_modes)
    n = ordering.n_modes
    dim = 1 << n
    out = sp.csr_matrix((dim, dim), dtype=np.complex128)
    for mono, coeff in symbolic.terms.items():
        term = sp.identity(dim, dtype=np.complex128, format="csr")
        for mode, dag in mono:
            term = term @ _ladder_sparse(n, ordering.position(mode), dag)
        out = out + coeff * term
    return out


def number_operator(ordering: Ordering) -> sp.csr_matrix:
    """Total particle number sum_i n_i (diagonal)."""
    idx = np.arange(1 << ordering.n_modes, dtype=np.uint64)
    return sp.diags(np.bitwise_count(idx).astype(np.complex128)).tocsr()


def parity_operator(n_modes: int) -> sp.csr_matrix:
    """Global parity P = prod_i (I - 2 n_i); P a_i P = -a_i."""
    idx = np.arange(1 << n_modes, dtype=np.uint64)
    signs = 1.0 - 2.0 * (np.bitwise_count(idx).astype(np.float64) % 2)
    return sp.diags(signs.astype(np.complex128)).tocsr()


def mode_permutation_unitary(perm, n_modes: int) -> sp.csr_matrix:
    """Fock lift of a mode permutation: U a^dag_k U^dag = a^dag_{perm[k]}."""
    tgt, sgn = permutation_fock(perm)
    dim = 1 << n_modes
    return sp.csr_matrix(
        (sgn.astype(np.complex128), (tgt, np.arange(dim))), shape=(dim, dim)
    )


def dense(op) -> np.ndarray:
    if sp.issparse(op):
        return np.asarray(op.todense(), dtype=np.complex128)
    return np.asarray(op, dtype=np.complex128)
