"""Hot numeric kernels: gate application, ladder-operator tables, Fock permutations.

Every kernel has a numba ``@njit`` implementation and a pure-numpy fallback.
The numba path is used by default; set ``FERMIQCA_PURE_NUMPY=1`` to force the
numpy path (``benchmarks/bench_kernels.py`` compares the two).

Conventions, used everywhere in this package:

* basis index ``i``: bit ``k`` of ``i`` is the occupation of the mode/qubit
  with ordering position ``k``; bit 0 is least significant.
* a gate on qubits ``(q_0, ..., q_{k-1})`` has matrix index
  ``g = sum_i bit(q_i) << i``: the first listed qubit is the least
  significant bit of the gate index.
"""

from __future__ import annotations

import numpy as np

from ._config import use_numba

_NUMBA = use_numba()

if _NUMBA:
    from numba import njit, prange
else:  # pragma: no cover - exercised via FERMIQCA_PURE_NUMPY=1 runs
    def njit(*args, **kwargs):
        def wrap(f):
            return f
        if args and callable(args[0]):
            return args[0]
        return wrap

    prange = range


def popcount(x):
    """Population count of a nonnegative int64 array (or scalar)."""
    return np.bitwise_count(np.asarray(x, dtype=np.uint64)).astype(np.int64)


@njit(cache=True)
def _popcount64(x):
    x = x - ((x >> 1) & 0x5555555555555555)
    x = (x & 0x3333333333333333) + ((x >> 2) & 0x3333333333333333)
    x = (x + (x >> 4)) & 0x0F0F0F0F0F0F0F0F
    return (x * 0x0101010101010101) >> 56


def _gate_offsets(qubits: np.ndarray) -> np.ndarray:
    """Index offsets of the 2^k gate basis states within the full register."""
    k = len(qubits)
    g = np.arange(1 << k, dtype=np.int64)
    offs = np.zeros(1 << k, dtype=np.int64)
    for i, q in enumerate(qubits):
        offs |= ((g >> i) & 1) << q
    return offs


def _base_indices(n: int, qubits: np.ndarray) -> np.ndarray:
    """All indices of an n-qubit register whose bits at `qubits` are zero."""
    qs = np.sort(np.asarray(qubits, dtype=np.int64))
    m = np.arange(1 << (n - len(qs)), dtype=np.int64)
    x = m
    for q in qs:
        low = x & ((1 << q) - 1)
        x = ((x >> q) << (q + 1)) | low
    return x


# ---------------------------------------------------------------------------
# gate applied to a state vector (or a batch of columns)

@njit(cache=True)
def _apply_gate_vec_nb(state, gate, base, offs):
    dim_g = gate.shape[0]
    out = state.copy()
    buf = np.empty(dim_g, dtype=np.complex128)
    for b in range(base.shape[0]):
        i0 = base[b]
        for g in range(dim_g):
            acc = 0.0 + 0.0j
            for h in range(dim_g):
                acc += gate[g, h] * state[i0 + offs[h]]
            buf[g] = acc
        for g in range(dim_g):
            out[i0 + offs[g]] = buf[g]
    return out


@njit(cache=True, parallel=True)
def _apply_gate_mat_nb(mat, gate, base, offs):
    dim_g = gate.shape[0]
    ncols = mat.shape[1]
    out = mat.copy()
    for b in prange(base.shape[0]):
        i0 = base[b]
        for c in range(ncols):
            for g in range(dim_g):
                acc = 0.0 + 0.0j
                for h in range(dim_g):
                    acc += gate[g, h] * mat[i0 + offs[h], c]
                out[i0 + offs[g], c] = acc
    return out


def _apply_gate_np(state, gate, qubits, n):
    k = len(qubits)
    batched = state.ndim == 2
    shape = (2,) * n + ((state.shape[1],) if batched else ())
    arr = state.reshape(shape)
    src = [n - 1 - qubits[i] for i in range(k - 1, -1, -1)]
    moved = np.moveaxis(arr, src, range(k))
    tail = moved.shape[k:]
    flat = np.ascontiguousarray(moved).reshape(1 << k, -1)
    res = (gate @ flat).reshape((2,) * k + tail)
    out = np.moveaxis(res, range(k), src)
    return np.ascontiguousarray(out).reshape(state.shape)


from functools import lru_cache


@lru_cache(maxsize=4096)
def _gate_plan(n: int, qubits: tuple):
    qs = np.asarray(qubits, dtype=np.int64)
    return _base_indices(n, qs), _gate_offsets(qs)


def apply_gate(state: np.ndarray, gate: np.ndarray, qubits, n: int) -> np.ndarray:
    """Apply a k-qubit gate to a state vector or to each column of a matrix.

    ``state`` has leading dimension 2^n; a 2-D input is treated as a batch of
    column vectors (i.e. this computes ``embed(gate) @ state``).
    """
    qubits = np.asarray(qubits, dtype=np.int64)
    gate = np.ascontiguousarray(gate, dtype=np.complex128)
    state = np.ascontiguousarray(state, dtype=np.complex128)
    # below ~2^18 amplitudes the parallel-launch overhead of the jitted
    # matrix kernel exceeds the work; hand small blocks to the BLAS path
    if _NUMBA and state.size >= (1 << 18 if state.ndim == 2 else 1):
        base, offs = _gate_plan(n, tuple(int(q) for q in qubits))
        if state.ndim == 1:
            return _apply_gate_vec_nb(state, gate, base, offs)
        return _apply_gate_mat_nb(state, gate, base, offs)
    return _apply_gate_np(state, gate, qubits, n)


def apply_gate_right(mat: np.ndarray, gate: np.ndarray, qubits, n: int) -> np.ndarray:
    """Compute ``mat @ embed(gate)`` without forming the embedded gate."""
    res = apply_gate(mat.T, np.asarray(gate, dtype=np.complex128).T, qubits, n)
    return np.ascontiguousarray(res.T)


# ---------------------------------------------------------------------------
# ladder operator tables

@njit(cache=True)
def _ladder_nb(n, pos, create):
    dim = 1 << n
    half = dim >> 1
    rows = np.empty(half, dtype=np.int64)
    cols = np.empty(half, dtype=np.int64)
    signs = np.empty(half, dtype=np.int64)
    mask = (1 << pos) - 1
    j = 0
    for i in range(dim):
        occ = (i >> pos) & 1
        if create and occ == 0:
            rows[j] = i | (1 << pos)
            cols[j] = i
            signs[j] = 1 - 2 * (_popcount64(i & mask) & 1)
            j += 1
        elif not create and occ == 1:
            rows[j] = i & ~(1 << pos)
            cols[j] = i
            signs[j] = 1 - 2 * (_popcount64(i & mask) & 1)
            j += 1
    return rows, cols, signs


def _ladder_np(n, pos, create):
    idx = np.arange(1 << n, dtype=np.int64)
    occ = (idx >> pos) & 1
    cols = idx[occ == 0] if create else idx[occ == 1]
    rows = cols | (1 << pos) if create else cols & ~(1 << pos)
    signs = 1 - 2 * (popcount(cols & ((1 << pos) - 1)) & 1)
    return rows, cols, signs


def ladder_table(n: int, pos: int, create: bool):
    """(rows, cols, signs) of a^dag_pos (or a_pos) in the occupation basis.

    The matrix entry is ``M[rows[j], cols[j]] = signs[j]`` with the sign
    (-1)^(number of occupied modes below `pos`).
    """
    if _NUMBA:
        return _ladder_nb(n, pos, bool(create))
    return _ladder_np(n, pos, create)


# ---------------------------------------------------------------------------
# Fock-space lift of a mode permutation

@njit(cache=True)
def _perm_fock_nb(perm, n):
    dim = 1 << n
    tgt = np.empty(dim, dtype=np.int64)
    sgn = np.empty(dim, dtype=np.int64)
    for i in range(dim):
        t = 0
        for k in range(n):
            if (i >> k) & 1:
                t |= 1 << perm[k]
        inv = 0
        for k in range(n):
            if not (i >> k) & 1:
                continue
            for l in range(k + 1, n):
                if (i >> l) & 1 and perm[k] > perm[l]:
                    inv += 1
        tgt[i] = t
        sgn[i] = 1 - 2 * (inv & 1)
    return tgt, sgn


def _perm_fock_np(perm, n):
    idx = np.arange(1 << n, dtype=np.int64)
    tgt = np.zeros_like(idx)
    for k in range(n):
        tgt |= ((idx >> k) & 1) << perm[k]
    inv = np.zeros_like(idx)
    for k in range(n):
        for l in range(k + 1, n):
            if perm[k] > perm[l]:
                inv += ((idx >> k) & 1) & ((idx >> l) & 1)
    return tgt, 1 - 2 * (inv & 1)


def permutation_fock(perm) -> tuple[np.ndarray, np.ndarray]:
    """Signed bitstring permutation lifting a mode permutation to Fock space.

    For U with U a^dag_k U^dag = a^dag_{perm[k]} and U|vac> = |vac>, returns
    (targets, signs) such that U|i> = signs[i] |targets[i]>.
    """
    perm = np.asarray(perm, dtype=np.int64)
    n = len(perm)
    if _NUMBA:
        return _perm_fock_nb(perm, n)
    return _perm_fock_np(perm, n)
