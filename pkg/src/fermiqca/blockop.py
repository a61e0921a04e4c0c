"""Operators stored as dense blocks on an explicit qubit support.

A ``BlockOperator`` represents ``block (x) I`` on an n-qubit register, with
``block`` acting on the listed qubits (first listed = least significant bit
of the block index). Keeping supports explicit lets conjugations, products,
and norm estimates run at the block dimension instead of 2^n.
"""

from __future__ import annotations

import numpy as np

from ._kernels import apply_gate, apply_gate_right


class BlockOperator:
    def __init__(self, block: np.ndarray, qubits, n_qubits: int):
        self.block = np.ascontiguousarray(block, dtype=np.complex128)
        self.qubits = tuple(int(q) for q in qubits)
        self.n_qubits = int(n_qubits)
        if self.block.shape != (1 << len(self.qubits),) * 2:
            raise ValueError("block shape does not match qubit count")
        if len(set(self.qubits)) != len(self.qubits):
            raise ValueError("duplicate qubits")
        if self.qubits and max(self.qubits) >= self.n_qubits:
            raise ValueError("qubit index out of range")

    @classmethod
    def identity(cls, n_qubits: int) -> "BlockOperator":
        return cls(np.eye(1, dtype=np.complex128), (), n_qubits)

    @classmethod
    def from_dense(cls, mat: np.ndarray, n_qubits: int) -> "BlockOperator":
        return cls(mat, tuple(range(n_qubits)), n_qubits)

    def copy(self) -> "BlockOperator":
        return BlockOperator(self.block.copy(), self.qubits, self.n_qubits)

    def adjoint(self) -> "BlockOperator":
        return BlockOperator(self.block.conj().T, self.qubits, self.n_qubits)

    # -- support handling ----------------------------------------------------

    def enlarged(self, qubits) -> "BlockOperator":
        """Same operator with the support extended by `qubits` (kron with I)."""
        extra = [int(q) for q in qubits if q not in self.qubits]
        if not extra:
            return self
        new_qubits = self.qubits + tuple(extra)
        eye = np.eye(1 << len(extra), dtype=np.complex128)
        block = np.kron(eye, self.block)  # appended qubits become high bits
        return BlockOperator(block, new_qubits, self.n_qubits)

    def sorted_support(self) -> "BlockOperator":
        """Equivalent operator with support qubits listed ascending."""
        k = len(self.qubits)
        order = np.argsort(self.qubits)
        if np.array_equal(order, np.arange(k)):
            return self
        g = np.arange(1 << k, dtype=np.int64)
        perm = np.zeros_like(g)
        for j in range(k):
            perm |= ((g >> order[j]) & 1) << j
        block = np.empty_like(self.block)
        block[np.ix_(perm, perm)] = self.block
        return BlockOperator(
            block, tuple(np.asarray(self.qubits)[order]), self.n_qubits
        )

    def to_dense(self) -> np.ndarray:
        """Materialize the full 2^n x 2^n matrix (use sparingly)."""
        from .fock import check_size

        check_size(self.n_qubits)
        op = self.sorted_support()
        n, k = op.n_qubits, len(op.qubits)
        full = np.kron(np.eye(1 << (n - k), dtype=np.complex128), op.block)
        if k == n or k == 0 and n == 0:
            return full
        # `full` holds the block on qubits 0..k-1; route bits to op.qubits
        final_pos = list(op.qubits) + [q for q in range(n) if q not in op.qubits]
        idx = np.arange(1 << n, dtype=np.int64)
        tgt = np.zeros_like(idx)
        for b in range(n):
            tgt |= ((idx >> b) & 1) << final_pos[b]
        out = np.empty_like(full)
        out[np.ix_(tgt, tgt)] = full
        return out

    # -- actions ---------------------------------------------------------------

    def apply_vec(self, v: np.ndarray) -> np.ndarray:
        if not self.qubits:
            return self.block[0, 0] * v
        return apply_gate(v, self.block, self.qubits, self.n_qubits)

    def apply_vec_h(self, v: np.ndarray) -> np.ndarray:
        if not self.qubits:
            return np.conj(self.block[0, 0]) * v
        return apply_gate(v, self.block.conj().T, self.qubits, self.n_qubits)

    def apply_left(self, mat: np.ndarray) -> np.ndarray:
        """embed(self) @ mat for a dense matrix."""
        if not self.qubits:
            return self.block[0, 0] * mat
        return apply_gate(mat, self.block, self.qubits, self.n_qubits)

    def apply_right(self, mat: np.ndarray) -> np.ndarray:
        """mat @ embed(self)."""
        if not self.qubits:
            return self.block[0, 0] * mat
        return apply_gate_right(mat, self.block, self.qubits, self.n_qubits)


def conjugate_by_gate(op: BlockOperator, gate_block: np.ndarray, gate_qubits,
                      adjoint_gate: bool = False) -> BlockOperator:
    """G X G^dag (or G^dag X G) with support growth only on overlap."""
    gate_qubits = tuple(int(q) for q in gate_qubits)
    if not set(gate_qubits) & set(op.qubits):
        return op  # disjoint supports: conjugation acts as the identity
    g = np.asarray(gate_block, dtype=np.complex128)
    if adjoint_gate:
        g = g.conj().T
    op = op.enlarged(gate_qubits)
    k = len(op.qubits)
    pos = [op.qubits.index(q) for q in gate_qubits]
    x = apply_gate(op.block, g, pos, k)
    x = apply_gate_right(x, g.conj().T, pos, k)
    return BlockOperator(x, op.qubits, op.n_qubits)


def conjugate_by_gates(op: BlockOperator, gates, adjoint: bool = False) -> BlockOperator:
    """Conjugate by a temporally ordered gate list: U X U^dag with
    U = gates[-1] ... gates[0]. With adjoint=True computes U^dag X U."""
    seq = list(gates)
    if not adjoint:
        for g in seq:
            op = conjugate_by_gate(op, g.matrix, g.qubits)
    else:
        for g in reversed(seq):
            op = conjugate_by_gate(op, g.matrix, g.qubits, adjoint_gate=True)
    return op


def product_norm_estimate(appliers, appliers_h, rhs_apply, rhs_apply_h,
                          dim: int, iters: int = 60, seed: int = 23) -> float:
    """||A_k ... A_1 - R||_2 via power iteration using only operator actions.

    `appliers` are in temporal order (A_1 applied first); `appliers_h` are
    the matching adjoint actions.
    """
    from .linalg import opnorm_estimate

    def apply(v):
        w = v
        for f in appliers:
            w = f(w)
        return w - rhs_apply(v)

    def apply_h(v):
        w = v
        for f in reversed(appliers_h):
            w = f(w)
        return w - rhs_apply_h(v)

    return opnorm_estimate(apply, apply_h, dim, iters=iters, seed=seed)


def commutator_norm(a: BlockOperator, b: BlockOperator,
                    iters: int = 50, seed: int = 29) -> float:
    """||[A, B]||_2; exact at small support unions, power iteration beyond."""
    from .linalg import opnorm_estimate, spectral_norm

    if not set(a.qubits) & set(b.qubits):
        return 0.0  # disjoint blocks commute entrywise-exactly
    union = sorted(set(a.qubits) | set(b.qubits))
    if len(union) <= 11:
        aa = a.enlarged(union).sorted_support()
        bb = b.enlarged(union).sorted_support()
        c = aa.block @ bb.block - bb.block @ aa.block
        return spectral_norm(c)
    dim = 1 << a.n_qubits

    def apply(v):
        return a.apply_vec(b.apply_vec(v)) - b.apply_vec(a.apply_vec(v))

    def apply_h(v):
        return b.apply_vec_h(a.apply_vec_h(v)) - a.apply_vec_h(b.apply_vec_h(v))

    return opnorm_estimate(apply, apply_h, dim, iters=iters, seed=seed)
