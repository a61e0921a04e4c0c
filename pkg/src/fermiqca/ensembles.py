"""Seeded random instances for the verification suites.

All randomness flows through numpy's Philox generator, a counter-based PRNG
with a published algorithm, so identical seeds reproduce identical suites on
any platform.
"""

from __future__ import annotations

import numpy as np

from .decomposition import FermionicGate
from .lattice import Lattice, Ordering
from .linalg import expm
from .symbolic import SymbolicOperator


def rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(int(seed)))


def random_even_generator(modes, gen: np.random.Generator,
                          scale: float = 1.0) -> SymbolicOperator:
    """Random Hermitian, parity-even generator over the given modes.

    Coefficients are drawn for each even normal-ordered monomial with
    independent Gaussian weights; hermiticity comes from adding the adjoint.
    """
    modes = list(modes)
    h = SymbolicOperator()
    choices = []
    for r in (2, 4):
        if len(modes) * 2 >= r:
            choices.append(r)
    n_terms = 3 * len(modes)
    for _ in range(n_terms):
        r = choices[int(gen.integers(0, len(choices)))]
        factors = []
        for _ in range(r):
            m = modes[int(gen.integers(0, len(modes)))]
            factors.append((m, bool(gen.integers(0, 2))))
        c = complex(gen.standard_normal(), gen.standard_normal()) * scale / r
        t = SymbolicOperator.monomial(tuple(factors), c)
        h = h + t + t.dagger()
    return h


def random_even_unitary_matrix(n_modes: int, gen: np.random.Generator) -> np.ndarray:
    """Haar-ish random unitary commuting with the global parity."""
    dim = 1 << n_modes
    h = gen.standard_normal((dim, dim)) + 1j * gen.standard_normal((dim, dim))
    h = (h + h.conj().T) / 2
    signs = 1.0 - 2.0 * (np.bitwise_count(np.arange(dim, dtype=np.uint64)) % 2)
    h = (h + h * np.outer(signs, signs)) / 2  # project onto the even algebra
    return expm(-1j * h)


def _nn_matchings(lattice: Lattice) -> list[tuple[tuple, tuple]]:
    """Nearest-neighbor site pairs (one unit step, with wrap)."""
    pairs = set()
    for s in lattice.sites:
        for t in lattice.neighborhood(s):
            if t == s:
                continue
            diff = 0
            for c, d, e, p in zip(s, t, lattice.extents, lattice.periodic):
                step = abs(c - d)
                if p:
                    step = min(step, e - step)
                diff += step
            if diff == 1:
                pairs.add(tuple(sorted((s, t))))
    return sorted(pairs)


def random_causal_step(lattice: Lattice, ordering: Ordering, seed: int,
                       scale: float = 0.7) -> list[FermionicGate]:
    """A seeded random causal unitary as a temporal gate list.

    One layer of on-site even gates followed by one layer of disjoint
    nearest-neighbor even gates. The Heisenberg image of a mode then stays
    inside the two-site gate containing it, so the step is causal at radius
    1 by construction; a deeper alternating brickwork would already leak
    past radius 1 at open boundaries.
    """
    gen = rng(seed)
    gates = []
    for site in lattice.sites:
        h = random_even_generator(lattice.modes_at(site), gen, scale)
        gates.append(FermionicGate(h, ordering, name=f"onsite{site}"))
    # one matching of nearest-neighbor pairs, greedily grown from a seed pick
    pairs = _nn_matchings(lattice)
    chosen, used = [], set()
    order = gen.permutation(len(pairs))
    for i in order:
        a, b = pairs[i]
        if a in used or b in used:
            continue
        chosen.append((a, b))
        used |= {a, b}
    for a, b in chosen:
        modes = lattice.modes_at(a) + lattice.modes_at(b)
        h = random_even_generator(modes, gen, scale)
        gates.append(FermionicGate(h, ordering, name=f"brick{a}-{b}"))
    return gates


def random_even_operator_matrix(modes, ordering: Ordering,
                                gen: np.random.Generator) -> np.ndarray:
    """Dense Hermitian even operator supported on the given modes."""
    h = random_even_generator(modes, gen)
    from . import fock

    return fock.dense(fock.lower(h, ordering))


def random_state(n_modes: int, gen: np.random.Generator,
                 forbidden_mask: int = 0) -> np.ndarray:
    """Normalized random state; amplitudes on `forbidden_mask` bits are zero."""
    dim = 1 << n_modes
    psi = gen.standard_normal(dim) + 1j * gen.standard_normal(dim)
    if forbidden_mask:
        idx = np.arange(dim)
        psi[(idx & forbidden_mask) != 0] = 0.0
    return psi / np.linalg.norm(psi)
