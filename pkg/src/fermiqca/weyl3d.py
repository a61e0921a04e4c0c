"""Discrete Weyl and Dirac fermions in three dimensions.

One step is U = T1 T2 T3 (T1 applied first to states), each T_i a
conditional shift along axis i acting in the sigma_i spin eigenbasis; the
Dirac variant doubles the internal space and appends the on-site mass
rotation. Momentum blocks converge to exp(-i p.sigma t) (Weyl) and
exp(-i (p.alpha + m beta) t) (Dirac) at first Trotter order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import fock
from .decomposition import FermionicGate, LocalUnitaryFactor
from .errors import DomainError
from .lattice import Lattice, Mode, Ordering, Region, grid
from .linalg import spectral_norm
from .symbolic import SymbolicOperator

UP, DOWN = 0, 1   # sigma_3 eigenbasis labels

SIGMA = (
    np.array([[0, 1], [1, 0]], dtype=np.complex128),
    np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    np.array([[1, 0], [0, -1]], dtype=np.complex128),
)
BETA4 = np.block(
    [[np.zeros((2, 2)), np.eye(2)], [np.eye(2), np.zeros((2, 2))]]
).astype(np.complex128)
ALPHA4 = tuple(
    np.block([[s, np.zeros((2, 2))], [np.zeros((2, 2)), -s]]).astype(np.complex128)
    for s in SIGMA
)

# on-site bras of the spin-up/down states along each axis:
# psi_(up_w) = sum_b BASIS[w][0, b] psi_(b z)
BASIS_CHANGE = (
    np.array([[1, 1], [1, -1]], dtype=np.complex128) / math.sqrt(2),    # x
    np.array([[1, -1j], [1, 1j]], dtype=np.complex128) / math.sqrt(2),  # y
    np.eye(2, dtype=np.complex128),                                     # z
)


@dataclass(frozen=True)
class Weyl3DParams:
    sites_per_axis: int
    spacing: float = 1.0
    mass: float = 0.0

    def __post_init__(self):
        if self.sites_per_axis < 3 or self.sites_per_axis % 2 == 0:
            raise DomainError("sites per axis must be odd and at least 3")

    def momenta(self) -> np.ndarray:
        n = self.sites_per_axis
        k = np.arange(-(n - 1) // 2, (n - 1) // 2 + 1)
        return 2 * np.pi * k / n


def _exp_pauli(theta: float, mat: np.ndarray) -> np.ndarray:
    """exp(-i theta mat) for an involution (mat^2 = I)."""
    dim = mat.shape[0]
    return math.cos(theta) * np.eye(dim, dtype=np.complex128) - 1j * math.sin(theta) * mat


def weyl_block_step(p: np.ndarray) -> np.ndarray:
    """exp(-i p3 s3) exp(-i p2 s2) exp(-i p1 s1): U = T1 T2 T3 with T1
    applied first to states (rightmost in the matrix product)."""
    p = np.asarray(p, dtype=float)
    return _exp_pauli(p[2], SIGMA[2]) @ _exp_pauli(p[1], SIGMA[1]) @ _exp_pauli(p[0], SIGMA[0])


def weyl_continuum_target(p: np.ndarray, t: float) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    w = float(np.linalg.norm(p))
    if w == 0.0:
        return np.eye(2, dtype=np.complex128)
    h = sum(pi * s for pi, s in zip(p, SIGMA))
    return math.cos(w * t) * np.eye(2) - 1j * math.sin(w * t) * h / w


def weyl_continuum_error(p: np.ndarray, t: float, eps: float) -> float:
    steps = t / eps
    if abs(steps - round(steps)) > 1e-9:
        raise DomainError(f"t/eps = {steps} is not an integer step count")
    u = np.linalg.matrix_power(weyl_block_step(np.asarray(p) * eps), int(round(steps)))
    return spectral_norm(u - weyl_continuum_target(p, t))


def weyl_eigenphases(p: np.ndarray) -> tuple[float, float]:
    """(omega_plus, omega_minus) of the one-step block."""
    vals = np.linalg.eigvals(weyl_block_step(p))
    phases = sorted(-np.angle(vals))
    return float(phases[1]), float(phases[0])


def dirac3d_block_step(p: np.ndarray, mass_coupling: float) -> np.ndarray:
    """exp(-iM beta) exp(-i p3 a3) exp(-i p2 a2) exp(-i p1 a1), 4x4."""
    p = np.asarray(p, dtype=float)
    u = np.eye(4, dtype=np.complex128)
    for i in range(3):
        u = _exp_pauli(p[i], ALPHA4[i]) @ u
    return _exp_pauli(mass_coupling, BETA4) @ u


def dirac3d_continuum_target(p: np.ndarray, mass: float, t: float) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    w = math.hypot(float(np.linalg.norm(p)), mass)
    if w == 0.0:
        return np.eye(4, dtype=np.complex128)
    h = sum(pi * a for pi, a in zip(p, ALPHA4)) + mass * BETA4
    return math.cos(w * t) * np.eye(4) - 1j * math.sin(w * t) * h / w


def dirac3d_continuum_error(p: np.ndarray, mass: float, t: float, eps: float) -> float:
    steps = t / eps
    if abs(steps - round(steps)) > 1e-9:
        raise DomainError(f"t/eps = {steps} is not an integer step count")
    u = np.linalg.matrix_power(
        dirac3d_block_step(np.asarray(p) * eps, mass * eps), int(round(steps))
    )
    return spectral_norm(u - dirac3d_continuum_target(p, mass, t))


# ---------------------------------------------------------------------------
# position-space builds on small lattices

def weyl_lattice(extents, periodic=None) -> Lattice:
    """Two modes per site; extent-1 axes are open, others periodic."""
    if periodic is None:
        periodic = [e > 1 for e in extents]
    return grid(extents, labels=2, periodic=periodic)


def rotated_mode_combo(site, axis: int, spin: int) -> SymbolicOperator:
    """Annihilation combination for spin `spin` along `axis` at `site`."""
    u = BASIS_CHANGE[axis]
    out = SymbolicOperator()
    for b in (UP, DOWN):
        c = u[spin, b]
        if c != 0:
            out = out + c * SymbolicOperator.annihilate(Mode(tuple(site), b))
    return out


def _rotated_swap_generator(site1, axis: int, spin1: int,
                            site2, spin2: int) -> SymbolicOperator:
    d1 = rotated_mode_combo(site1, axis, spin1)
    d2 = rotated_mode_combo(site2, axis, spin2)
    diff_dag = d2.dagger() - d1.dagger()
    return (math.pi / 2) * (diff_dag * (d2 - d1))


def swap_decompose_Ti(axis: int, handedness: str, lattice: Lattice,
                      ordering: Ordering) -> list[LocalUnitaryFactor]:
    """Swap-layer decomposition of the conditional shift along one axis.

    Right-handed shifts move axis-spin-up one step forward; the pattern is
    the axis-3 one conjugated into the sigma_axis eigenbasis, so every
    factor is a swap of on-site rotated mode combinations. Temporal order:
    the inter-site layer first, then the on-site layer.
    """
    if axis not in (1, 2, 3):
        raise DomainError("axis must be 1, 2 or 3")
    if handedness not in ("right", "left"):
        raise DomainError("handedness must be 'right' or 'left'")
    ax = axis - 1
    sign = +1 if handedness == "right" else -1
    step = np.zeros(lattice.dims, dtype=int)
    step[ax] = sign
    factors = []
    for site in lattice.sites:
        prev = tuple(
            (c - s) % e if p else c - s
            for c, s, e, p in zip(site, step, lattice.extents, lattice.periodic)
        )
        gen = _rotated_swap_generator(site, ax, DOWN, prev, UP)
        factors.append(
            LocalUnitaryFactor(
                FermionicGate(gen, ordering).block,
                Region(lattice, {site, prev}),
                "swap",
                Mode(site, DOWN),
                generator=gen,
            )
        )
    for site in lattice.sites:
        gen = _rotated_swap_generator(site, ax, UP, site, DOWN)
        factors.append(
            LocalUnitaryFactor(
                FermionicGate(gen, ordering).block,
                Region(lattice, {site}),
                "swap",
                Mode(site, UP),
                generator=gen,
            )
        )
    return factors


def shift_generator(axis: int, handedness: str,
                    lattice: Lattice) -> SymbolicOperator:
    """sum_p p_i psi_p^ sigma_i psi_p in position space (the exponent of
    T_i up to the sign convention of the handedness)."""
    ax = axis - 1
    n = lattice.extents[ax]
    if n == 1:
        return SymbolicOperator()
    ps = 2 * np.pi * np.arange(-(n - 1) // 2, (n - 1) // 2 + 1) / n
    sgn = +1 if handedness == "right" else -1
    h = SymbolicOperator()
    u = BASIS_CHANGE[ax]
    for d in range(n):
        c = complex(np.sum(ps * np.exp(1j * ps * d)) / n)
        if abs(c) < 1e-15:
            continue
        for site in lattice.sites:
            tgt = list(site)
            tgt[ax] = (tgt[ax] + d) % n
            tgt = tuple(tgt)
            for spin, spin_sign in ((UP, +1), (DOWN, -1)):
                combo_t = rotated_mode_combo(tgt, ax, spin).dagger()
                combo_s = rotated_mode_combo(site, ax, spin)
                h = h + (sgn * spin_sign * c) * (combo_t * combo_s)
    return h


def directional_shift_dense(axis: int, handedness: str,
                            lattice: Lattice, ordering: Ordering) -> np.ndarray:
    """T_i built independently of the swap route: rotate every site into the
    sigma_i eigenbasis, apply the conditional-shift permutation, rotate back."""
    ax = axis - 1
    n_modes = ordering.n_modes
    fock.check_size(n_modes)
    u = BASIS_CHANGE[ax]
    # site rotation R with R d_(s,w) R^dag = psi_(s,z-basis)
    rot = np.eye(1 << n_modes, dtype=np.complex128)
    if ax != 2:
        import scipy.linalg

        # R = exp(-i dGamma(h)) with e^{ih} = u^dag gives R d_(s,w) R^dag = psi_(s,z)
        h1p = -1j * scipy.linalg.logm(u.conj().T)
        for site in lattice.sites:
            gen = SymbolicOperator()
            for a in (UP, DOWN):
                for b in (UP, DOWN):
                    if abs(h1p[a, b]) > 1e-14:
                        gen = gen + complex(h1p[a, b]) * (
                            SymbolicOperator.create(Mode(site, a))
                            * SymbolicOperator.annihilate(Mode(site, b))
                        )
            g = FermionicGate(gen, ordering, name=f"rot{site}")
            rot = g.block.apply_left(rot)
    sign = +1 if handedness == "right" else -1
    perm = np.zeros(n_modes, dtype=np.int64)
    for k, m in enumerate(ordering.modes):
        tgt = list(m.site)
        shift = sign if m.label == UP else -sign
        tgt[ax] = (tgt[ax] + shift) % lattice.extents[ax]
        perm[k] = ordering.position(Mode(tuple(tgt), m.label))
    p = fock.dense(fock.mode_permutation_unitary(perm, n_modes))
    return rot.conj().T @ p @ rot
