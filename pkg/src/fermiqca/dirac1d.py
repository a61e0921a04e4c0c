"""Discrete-spacetime Dirac fermions on a ring.

One timestep is U = W T: T conditionally shifts right-handed modes one site
right and left-handed modes one site left, W applies the on-site mass
rotation exp(-iM psi^ beta psi). In momentum space the step block-
diagonalizes into 2x2 blocks with dispersion cos w = cos M cos p, and
(WT)^{t/eps} converges to the continuum Dirac evolution at first Trotter
order as eps -> 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import fock
from .decomposition import FermionicGate, LocalUnitaryFactor, swap_block
from .errors import DomainError
from .lattice import Lattice, Mode, Ordering, Region, chain, row_major_ordering
from .linalg import spectral_norm
from .symbolic import SymbolicOperator

L_LABEL = 0   # pi(n, l) = 2n
R_LABEL = 1   # pi(n, r) = 2n + 1

BETA = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=np.complex128)
ALPHA1 = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=np.complex128)


@dataclass(frozen=True)
class DiracParams:
    """Lattice and continuum parameters tied by M = m*eps and t = tau*eps."""

    sites: int
    spacing: float
    mass: float
    steps: int = 1

    def __post_init__(self):
        if self.sites < 3 or self.sites % 2 == 0:
            raise DomainError("the site count must be odd and at least 3")
        if self.spacing <= 0:
            raise DomainError("the lattice spacing must be positive")

    @property
    def ring_length(self) -> float:
        return self.sites * self.spacing

    @property
    def mass_coupling(self) -> float:
        return self.mass * self.spacing

    @property
    def time(self) -> float:
        return self.steps * self.spacing

    @classmethod
    def from_mass_coupling(cls, sites: int, mass_coupling: float,
                           spacing: float = 1.0, steps: int = 1) -> "DiracParams":
        return cls(sites, spacing, mass_coupling / spacing, steps)

    def momenta(self) -> np.ndarray:
        """Discrete momenta 2 pi k / N, k in {-(N-1)/2, ..., (N-1)/2}."""
        n = self.sites
        k = np.arange(-(n - 1) // 2, (n - 1) // 2 + 1)
        return 2 * np.pi * k / n


def dirac_lattice(params: DiracParams) -> Lattice:
    return chain(params.sites, labels=2, periodic=True)


def dirac_ordering(lattice: Lattice) -> Ordering:
    """pi(n, l) = 2n, pi(n, r) = 2n + 1."""
    return row_major_ordering(lattice)


def _mode(n: int, label: int, sites: int) -> Mode:
    return Mode((n % sites,), label)


# ---------------------------------------------------------------------------
# the step unitary in position space

def build_T(params: DiracParams, ordering: Ordering):
    """Conditional shift: T psi_{n,r} T^dag = psi_{n+1,r}, left movers the
    other way (indices mod N). Built as a signed Fock permutation."""
    n = params.sites
    fock.check_size(2 * n)
    perm = np.zeros(2 * n, dtype=np.int64)
    for site in range(n):
        perm[2 * site + L_LABEL] = 2 * ((site - 1) % n) + L_LABEL
        perm[2 * site + R_LABEL] = 2 * ((site + 1) % n) + R_LABEL
    return fock.mode_permutation_unitary(perm, 2 * n)


def momentum_shift_generator(params: DiracParams) -> SymbolicOperator:
    """Position-space form of sum_p p psi_p^ alpha1 psi_p (oracle route for T).

    The momentum sum evaluates to hopping coefficients c(d) =
    (1/N) sum_p p e^{ipd}; T then equals exp(-i sum ...) with the r modes
    coupled by +c and the l modes by -c.
    """
    n = params.sites
    ps = params.momenta()
    h = SymbolicOperator()
    for d in range(n):
        c = complex(np.sum(ps * np.exp(1j * ps * d)) / n)
        if abs(c) < 1e-15:
            continue
        for site in range(n):
            tgt = (site + d) % n
            h = h + c * (
                SymbolicOperator.create(_mode(tgt, R_LABEL, n))
                * SymbolicOperator.annihilate(_mode(site, R_LABEL, n))
            )
            h = h - c * (
                SymbolicOperator.create(_mode(tgt, L_LABEL, n))
                * SymbolicOperator.annihilate(_mode(site, L_LABEL, n))
            )
    return h


def w_site_generator(params: DiracParams, site: int) -> SymbolicOperator:
    """M * psi_n^ beta psi_n = M (r^ l + l^ r) at one site."""
    n = params.sites
    r, l = _mode(site, R_LABEL, n), _mode(site, L_LABEL, n)
    hop = SymbolicOperator.create(r) * SymbolicOperator.annihilate(l)
    return params.mass_coupling * (hop + hop.dagger())


def w_gates(params: DiracParams, ordering: Ordering) -> list[FermionicGate]:
    return [
        FermionicGate(w_site_generator(params, s), ordering, name=f"W{s}")
        for s in range(params.sites)
    ]


def build_W(params: DiracParams, ordering: Ordering) -> np.ndarray:
    fock.check_size(2 * params.sites)
    u = np.eye(1 << (2 * params.sites), dtype=np.complex128)
    for g in w_gates(params, ordering):
        u = g.block.apply_left(u)
    return u


def build_step(params: DiracParams, ordering: Ordering) -> np.ndarray:
    """U = W T, dense."""
    return build_W(params, ordering) @ fock.dense(build_T(params, ordering))


# ---------------------------------------------------------------------------
# swap-layer decomposition of T

def swap_decompose_T(params: DiracParams, ordering: Ordering,
                     materialize: bool | None = None) -> list[LocalUnitaryFactor]:
    """Two swap layers reproducing T: psi_{n,l} <-> psi_{n-1,r} at every n,
    then psi_{n,r} <-> psi_{n,l} at every n (temporal order).

    The n = 0 swap of the first layer crosses the periodic boundary; its
    block is materialized only on small rings (elsewhere the factor carries
    just its symbolic generator, for the Majorana repair path).
    """
    n = params.sites
    lattice = dirac_lattice(params)
    if materialize is None:
        materialize = 2 * n <= 16
    factors = []
    for site in range(n):
        m1 = _mode(site, L_LABEL, n)
        m2 = _mode(site - 1, R_LABEL, n)
        gen = _swap_generator_scaled(m1, m2)
        op = None
        if site != 0 or materialize:
            op = swap_block(m1, m2, ordering)
        factors.append(
            LocalUnitaryFactor(
                op, Region(lattice, {m1.site, m2.site}), "swap", m1, generator=gen
            )
        )
    for site in range(n):
        m1 = _mode(site, R_LABEL, n)
        m2 = _mode(site, L_LABEL, n)
        factors.append(
            LocalUnitaryFactor(
                swap_block(m1, m2, ordering),
                Region(lattice, {m1.site}),
                "swap",
                m1,
                generator=_swap_generator_scaled(m1, m2),
            )
        )
    return factors


def _swap_generator_scaled(m1: Mode, m2: Mode) -> SymbolicOperator:
    d = SymbolicOperator.create(m2) - SymbolicOperator.create(m1)
    dd = SymbolicOperator.annihilate(m2) - SymbolicOperator.annihilate(m1)
    return (math.pi / 2) * (d * dd)


def step_factors(params: DiracParams, ordering: Ordering,
                 materialize: bool | None = None) -> list[LocalUnitaryFactor]:
    """Temporal factor list for one step U = W T: T's two swap layers, then
    the on-site mass rotations."""
    lattice = dirac_lattice(params)
    factors = swap_decompose_T(params, ordering, materialize)
    for s in range(params.sites):
        gen = w_site_generator(params, s)
        factors.append(
            LocalUnitaryFactor(
                FermionicGate(gen, ordering).block,
                Region(lattice, {(s,)}),
                "onsite",
                _mode(s, R_LABEL, params.sites),
                generator=gen,
            )
        )
    return factors


# ---------------------------------------------------------------------------
# single-particle momentum blocks and the continuum limit

@dataclass(frozen=True)
class SingleParticleBlock:
    momentum: float
    matrix: np.ndarray  # 2x2, basis (r, l)


def block_step(p: float, mass_coupling: float) -> SingleParticleBlock:
    """exp(-iM beta) exp(-ip alpha1) as an exact 2x2 product."""
    m = mass_coupling
    exp_beta = math.cos(m) * np.eye(2) - 1j * math.sin(m) * BETA
    exp_alpha = np.diag([np.exp(-1j * p), np.exp(1j * p)])
    return SingleParticleBlock(p, exp_beta @ exp_alpha)


def dispersion_omega(p: float, mass_coupling: float) -> float:
    """Eigenphase w >= 0 of the one-step block: cos w = cos M cos p."""
    vals = np.linalg.eigvals(block_step(p, mass_coupling).matrix)
    return float(np.max(np.abs(np.angle(vals))))


def continuum_target(p: float, mass: float, t: float) -> np.ndarray:
    """exp(-i (p alpha1 + m beta) t), closed form."""
    w = math.hypot(p, mass)
    h = p * ALPHA1 + mass * BETA
    if w == 0.0:
        return np.eye(2, dtype=np.complex128)
    return math.cos(w * t) * np.eye(2) - 1j * math.sin(w * t) * h / w


def continuum_error(mass: float, p: float, t: float, eps: float) -> float:
    """Spectral-norm distance between the stepped lattice block and the
    continuum evolution: || block_step(p eps, m eps)^(t/eps) - e^{-iHt} ||."""
    steps = t / eps
    if abs(steps - round(steps)) > 1e-9:
        raise DomainError(f"t/eps = {steps} is not an integer step count")
    u = np.linalg.matrix_power(block_step(p * eps, mass * eps).matrix, int(round(steps)))
    return spectral_norm(u - continuum_target(p, mass, t))


def momentum_single_particle_states(params: DiracParams, ordering: Ordering) -> dict:
    """|p, a> = psi^dag_{p,a}|vac> column vectors, basis order (r, l)."""
    n = params.sites
    out = {}
    for p in params.momenta():
        cols = []
        for label in (R_LABEL, L_LABEL):
            v = np.zeros(1 << (2 * n), dtype=np.complex128)
            for site in range(n):
                v[1 << (2 * site + label)] = np.exp(1j * p * site) / math.sqrt(n)
            cols.append(v)
        out[float(p)] = np.column_stack(cols)
    return out
