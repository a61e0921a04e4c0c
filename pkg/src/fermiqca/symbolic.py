"""Symbolic fermionic operators: complex-weighted sums of ladder monomials.

A monomial is a tuple of (Mode, dagger) factors kept in written order; the
matrix of a monomial is the product of the factor matrices in that order.
"""

from __future__ import annotations

from typing import Iterable, Mapping

from .lattice import Mode

Factor = tuple[Mode, bool]          # (mode, True for creation)
Monomial = tuple[Factor, ...]       # () is the identity


class SymbolicOperator:
    """Linear combination of ladder-operator monomials."""

    def __init__(self, terms: Mapping[Monomial, complex] | None = None):
        self.terms: dict[Monomial, complex] = {}
        if terms:
            for mono, coeff in terms.items():
                c = complex(coeff)
                if c != 0:
                    self.terms[tuple(mono)] = self.terms.get(tuple(mono), 0) + c
        self._prune()

    def _prune(self):
        self.terms = {m: c for m, c in self.terms.items() if c != 0}

    # -- constructors ------------------------------------------------------

    @classmethod
    def identity(cls, coeff: complex = 1.0) -> "SymbolicOperator":
        return cls({(): coeff})

    @classmethod
    def create(cls, mode: Mode) -> "SymbolicOperator":
        return cls({((mode, True),): 1.0})

    @classmethod
    def annihilate(cls, mode: Mode) -> "SymbolicOperator":
        return cls({((mode, False),): 1.0})

    @classmethod
    def number(cls, mode: Mode) -> "SymbolicOperator":
        return cls({((mode, True), (mode, False)): 1.0})

    @classmethod
    def monomial(cls, factors: Iterable[Factor], coeff: complex = 1.0) -> "SymbolicOperator":
        return cls({tuple(factors): coeff})

    # -- algebra -----------------------------------------------------------

    def __add__(self, other: "SymbolicOperator") -> "SymbolicOperator":
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return SymbolicOperator(out)

    def __sub__(self, other: "SymbolicOperator") -> "SymbolicOperator":
        return self + (other * -1)

    def __mul__(self, other):
        if isinstance(other, SymbolicOperator):
            out: dict[Monomial, complex] = {}
            for m1, c1 in self.terms.items():
                for m2, c2 in other.terms.items():
                    key = m1 + m2
                    out[key] = out.get(key, 0) + c1 * c2
            return SymbolicOperator(out)
        return SymbolicOperator({m: c * other for m, c in self.terms.items()})

    def __rmul__(self, scalar) -> "SymbolicOperator":
        return self * scalar

    def dagger(self) -> "SymbolicOperator":
        out: dict[Monomial, complex] = {}
        for mono, c in self.terms.items():
            adj = tuple((mode, not dag) for mode, dag in reversed(mono))
            out[adj] = out.get(adj, 0) + c.conjugate()
        return SymbolicOperator(out)

    # -- queries -----------------------------------------------------------

    def modes(self) -> set[Mode]:
        return {mode for mono in self.terms for mode, _ in mono}

    def monomials(self) -> list[tuple[Monomial, complex]]:
        return sorted(self.terms.items(), key=lambda t: (len(t[0]), repr(t[0])))

    def is_even(self) -> bool:
        return all(len(m) % 2 == 0 for m in self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __repr__(self):
        if not self.terms:
            return "SymbolicOperator(0)"
        parts = []
        for mono, c in self.monomials():
            body = " ".join(f"{m}{'^' if dag else ''}" for m, dag in mono) or "I"
            parts.append(f"({c:g})*{body}")
        return " + ".join(parts)


def hubbard_hamiltonian(lattice, hopping: float, onsite_u: float) -> SymbolicOperator:
    """Hubbard Hamiltonian: nearest-neighbor hopping plus on-site repulsion.

    H = -hopping * sum_<xy> sum_mu (a^_x,mu a_y,mu + h.c.)
        + onsite_u * sum_x n_{x,up} n_{x,down}

    Sites need two labels (0 = up, 1 = down) for the repulsion term.
    """
    H = SymbolicOperator()
    seen_pairs = set()
    for site in lattice.sites:
        for nb in lattice.neighborhood(site):
            if nb == site:
                continue
            # nearest neighbors only: one unit step in exactly one direction
            diff = 0
            for c, d, e, p in zip(site, nb, lattice.extents, lattice.periodic):
                step = abs(c - d)
                if p:
                    step = min(step, e - step)
                diff += step
            if diff != 1:
                continue
            key = frozenset((site, nb))
            if key in seen_pairs:
                continue
            seen_pairs.add(key)
            labels = {m.label for m in lattice.modes_at(site)}
            for mu in sorted(labels):
                a, b = Mode(site, mu), Mode(nb, mu)
                hop = SymbolicOperator.create(a) * SymbolicOperator.annihilate(b)
                H = H + (-hopping) * (hop + hop.dagger())
    for site in lattice.sites:
        labels = sorted({m.label for m in lattice.modes_at(site)})
        if len(labels) >= 2:
            up, dn = Mode(site, labels[0]), Mode(site, labels[1])
            H = H + onsite_u * (
                SymbolicOperator.number(up) * SymbolicOperator.number(dn)
            )
    return H
