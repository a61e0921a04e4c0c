"""Jordan-Wigner transformation between ladder monomials and Pauli strings.

Under the bit convention of :mod:`fermiqca.fock` the JW map is

    a^dag_x  ->  sigma+_x  prod_{pi(y) < pi(x)} Z_y

so matrices of Pauli sums and lowered symbolic operators agree entry for
entry. Sigma+/- are kept as first-class letters; they expand to (X -+ iY)/2
only when an XYZ form is requested.
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp

from .lattice import Lattice, Ordering
from .symbolic import SymbolicOperator

LETTERS = {
    "I": np.eye(2, dtype=np.complex128),
    "X": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    "Z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
    "+": np.array([[0, 0], [1, 0]], dtype=np.complex128),   # |1><0|
    "-": np.array([[0, 1], [0, 0]], dtype=np.complex128),   # |0><1|
    "0": np.array([[1, 0], [0, 0]], dtype=np.complex128),   # projector, internal
    "1": np.array([[0, 0], [0, 1]], dtype=np.complex128),   # projector, internal
}

_ADJOINT = {"I": "I", "X": "X", "Y": "Y", "Z": "Z", "+": "-", "-": "+", "0": "0", "1": "1"}


def _build_product_table():
    table = {}
    for l1, m1 in LETTERS.items():
        for l2, m2 in LETTERS.items():
            prod = m1 @ m2
            if np.allclose(prod, 0):
                table[l1, l2] = (0.0, "I")
                continue
            for name, m in LETTERS.items():
                scale = prod[np.abs(m) > 0.5][0] / m[np.abs(m) > 0.5][0]
                if np.allclose(prod, scale * m):
                    table[l1, l2] = (complex(scale), name)
                    break
            else:  # pragma: no cover - alphabet is closed under products
                raise RuntimeError(f"product {l1}{l2} not in alphabet")
    return table


_PRODUCT = _build_product_table()


class PauliTerm:
    """One phased string: coefficient times a letter per qubit."""

    __slots__ = ("coefficient", "letters")

    def __init__(self, coefficient: complex, letters: dict[int, str]):
        self.coefficient = complex(coefficient)
        self.letters = {q: l for q, l in letters.items() if l != "I"}

    def key(self) -> tuple:
        return tuple(sorted(self.letters.items()))

    def __mul__(self, other: "PauliTerm") -> "PauliTerm":
        coeff = self.coefficient * other.coefficient
        letters = dict(self.letters)
        for q, l2 in other.letters.items():
            l1 = letters.get(q, "I")
            scale, l = _PRODUCT[l1, l2]
            coeff *= scale
            if coeff == 0:
                return PauliTerm(0.0, {})
            letters[q] = l
        return PauliTerm(coeff, letters)

    def adjoint(self) -> "PauliTerm":
        return PauliTerm(
            self.coefficient.conjugate(),
            {q: _ADJOINT[l] for q, l in self.letters.items()},
        )

    def matrix(self, n_qubits: int) -> sp.csr_matrix:
        out = sp.identity(1, dtype=np.complex128, format="csr") * self.coefficient
        for q in range(n_qubits - 1, -1, -1):
            m = sp.csr_matrix(LETTERS[self.letters.get(q, "I")])
            out = sp.kron(out, m, format="csr")
        return out

    def __repr__(self):
        body = " ".join(f"{l}{q}" for q, l in sorted(self.letters.items())) or "I"
        return f"{self.coefficient:g}*{body}"


class PauliSum:
    """Canonicalized list of Pauli terms."""

    def __init__(self, terms):
        self.terms: list[PauliTerm] = list(terms)

    def canonicalize(self) -> "PauliSum":
        """Expand internal projector letters to (I +- Z)/2, merge equal
        letter-maps, and drop zero terms."""
        expanded: list[PauliTerm] = []
        stack = list(self.terms)
        while stack:
            t = stack.pop()
            proj = next((q for q, l in t.letters.items() if l in "01"), None)
            if proj is None:
                expanded.append(t)
                continue
            sign = 1.0 if t.letters[proj] == "0" else -1.0
            rest = {q: l for q, l in t.letters.items() if q != proj}
            stack.append(PauliTerm(0.5 * t.coefficient, rest))
            stack.append(
                PauliTerm(0.5 * sign * t.coefficient, {**rest, proj: "Z"})
            )
        merged: dict[tuple, complex] = {}
        for t in expanded:
            merged[t.key()] = merged.get(t.key(), 0.0) + t.coefficient
        return PauliSum(
            [PauliTerm(c, dict(k)) for k, c in sorted(merged.items()) if c != 0]
        )

    def expand_sigmas(self) -> "PauliSum":
        """Rewrite sigma+/- letters as (X -+ iY)/2; result is in XYZ form."""
        out: list[PauliTerm] = []
        stack = list(self.canonicalize().terms)
        while stack:
            t = stack.pop()
            sq = next((q for q, l in t.letters.items() if l in "+-"), None)
            if sq is None:
                out.append(t)
                continue
            s = -1j if t.letters[sq] == "+" else 1j
            rest = {q: l for q, l in t.letters.items() if q != sq}
            stack.append(PauliTerm(0.5 * t.coefficient, {**rest, sq: "X"}))
            stack.append(PauliTerm(0.5 * s * t.coefficient, {**rest, sq: "Y"}))
        merged: dict[tuple, complex] = {}
        for t in out:
            merged[t.key()] = merged.get(t.key(), 0.0) + t.coefficient
        return PauliSum(
            [PauliTerm(c, dict(k)) for k, c in sorted(merged.items()) if c != 0]
        )

    def adjoint(self) -> "PauliSum":
        return PauliSum([t.adjoint() for t in self.terms]).canonicalize()

    def matrix(self, n_qubits: int) -> sp.csr_matrix:
        dim = 1 << n_qubits
        out = sp.csr_matrix((dim, dim), dtype=np.complex128)
        for t in self.canonicalize().terms:
            out = out + t.matrix(n_qubits)
        return out

    def __len__(self):
        return len(self.terms)

    def __repr__(self):
        return " + ".join(map(repr, self.terms)) or "0"


def _jw_factor(position: int, dagger: bool) -> PauliTerm:
    letters = {k: "Z" for k in range(position)}
    letters[position] = "+" if dagger else "-"
    return PauliTerm(1.0, letters)


def jw(symbolic: SymbolicOperator, ordering: Ordering) -> PauliSum:
    """Jordan-Wigner image of a symbolic operator under `ordering`."""
    terms = []
    for mono, coeff in symbolic.terms.items():
        t = PauliTerm(coeff, {})
        for mode, dag in mono:
            t = t * _jw_factor(ordering.position(mode), dag)
        terms.append(t)
    return PauliSum(terms).canonicalize()


def support(p: PauliSum) -> set[int]:
    """Union of non-identity letter positions across terms."""
    qubits: set[int] = set()
    for t in p.canonicalize().terms:
        qubits.update(t.letters)
    return qubits


class LocalityEntry:
    """Locality verdict for one monomial of a symbolic operator."""

    __slots__ = (
        "monomial", "coefficient", "support", "site_qubits",
        "neighborhood_qubits", "local_on_sites", "local_on_neighborhood",
    )

    def __init__(self, monomial, coefficient, supp, site_qubits, nbh_qubits):
        self.monomial = monomial
        self.coefficient = coefficient
        self.support = frozenset(supp)
        self.site_qubits = frozenset(site_qubits)
        self.neighborhood_qubits = frozenset(nbh_qubits)
        self.local_on_sites = self.support <= self.site_qubits
        self.local_on_neighborhood = self.support <= self.neighborhood_qubits

    def to_dict(self) -> dict:
        return {
            "monomial": repr(self.monomial),
            "support": sorted(self.support),
            "site_qubits": sorted(self.site_qubits),
            "neighborhood_qubits": sorted(self.neighborhood_qubits),
            "local_on_sites": self.local_on_sites,
            "local_on_neighborhood": self.local_on_neighborhood,
        }


class LocalityReport:
    """Per-monomial qubit-locality analysis of a symbolic operator.

    A monomial is flagged (a candidate for the Majorana repair) when its
    qubit support leaks outside the qubits of its own sites: that is the
    condition under which the repaired term connects the same lattice sites
    as the fermionic original.
    """

    def __init__(self, entries: list[LocalityEntry]):
        self.entries = entries

    @property
    def all_local(self) -> bool:
        return all(e.local_on_sites for e in self.entries)

    def flagged(self) -> list[LocalityEntry]:
        return [e for e in self.entries if not e.local_on_sites]

    def to_json(self) -> list[dict]:
        return [e.to_dict() for e in self.entries]


def jw_locality_report(
    symbolic: SymbolicOperator, ordering: Ordering, lattice: Lattice
) -> LocalityReport:
    entries = []
    for mono, coeff in symbolic.monomials():
        supp = support(jw(SymbolicOperator.monomial(mono), ordering))
        sites = {mode.site for mode, _ in mono}
        site_qubits = ordering.region_qubits(sites)
        nbh_sites = set()
        for s in sites:
            nbh_sites |= lattice.neighborhood(s)
        nbh_qubits = ordering.region_qubits(nbh_sites)
        entries.append(LocalityEntry(mono, coeff, supp, site_qubits, nbh_qubits))
    return LocalityReport(entries)


# ---------------------------------------------------------------------------
# text serialization: one term per line, `coeff * [X3 Z1 +0]`

def dumps(p: PauliSum) -> str:
    lines = []
    for t in p.canonicalize().terms:
        body = " ".join(f"{l}{q}" for q, l in sorted(t.letters.items()))
        lines.append(f"{complex(t.coefficient)!r} * [{body}]")
    return "\n".join(lines) + ("\n" if lines else "")


def loads(text: str) -> PauliSum:
    terms = []
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        coeff_part, _, body = line.partition(" * ")
        letters = {}
        inner = body.strip()[1:-1].strip()
        if inner:
            for tok in inner.split():
                letters[int(tok[1:])] = tok[0]
        terms.append(PauliTerm(complex(coeff_part), letters))
    return PauliSum(terms).canonicalize()
