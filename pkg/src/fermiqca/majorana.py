"""Majorana-ancilla locality repair for qubit representations.

A fermionic term coupling sites x and y can be qubit-non-local because of
its Jordan-Wigner Z-strings. Adding one ancilla mode at each site and
inserting M = i m_x m_y (m = c + c^dag) between the x and y parts cancels
the strings; on the +1 eigenspace of every M the substituted operator acts
exactly like the original.
"""

from __future__ import annotations

import json
import warnings

import numpy as np

from . import fock
from .blockop import BlockOperator
from .causality import parity_split
from .errors import ContractError, DomainError, ResourceError
from .jwmap import LETTERS, jw, jw_locality_report
from .lattice import Lattice, Mode, ModeKind, Ordering, Region, row_major_ordering
from .linalg import expm, principal_generator, spectral_norm
from .symbolic import SymbolicOperator


class AncillaPair:
    """Two ancilla modes c_(x,y) at site x and c_(y,x) at site y."""

    __slots__ = ("c_at_x", "c_at_y", "pair_id")

    def __init__(self, c_at_x: Mode, c_at_y: Mode, pair_id: int):
        for m in (c_at_x, c_at_y):
            if m.kind != ModeKind.ANCILLA:
                raise DomainError(f"{m} is not an ancilla mode")
        self.c_at_x = c_at_x
        self.c_at_y = c_at_y
        self.pair_id = pair_id

    @property
    def site_x(self):
        return self.c_at_x.site

    @property
    def site_y(self):
        return self.c_at_y.site

    def modes(self):
        return (self.c_at_x, self.c_at_y)

    def __repr__(self):
        return f"AncillaPair{self.pair_id}({self.site_x}<->{self.site_y})"


class AncillaRegistry:
    """Allocates one ancilla pair per unordered site pair and rebuilds the
    extended lattice/ordering as pairs are added."""

    def __init__(self, lattice: Lattice):
        self.base = lattice
        self.pairs: list[AncillaPair] = []
        self._by_sites: dict[frozenset, AncillaPair] = {}
        self._labels_used: dict[tuple, int] = {}

    def _new_ancilla(self, site) -> Mode:
        k = self._labels_used.get(site, 0)
        self._labels_used[site] = k + 1
        return Mode(site, k, ModeKind.ANCILLA)

    def pair_for(self, site_x, site_y) -> AncillaPair:
        site_x, site_y = tuple(site_x), tuple(site_y)
        if site_x == site_y:
            raise DomainError("an ancilla pair needs two distinct sites")
        key = frozenset((site_x, site_y))
        if key not in self._by_sites:
            pair = AncillaPair(
                self._new_ancilla(site_x), self._new_ancilla(site_y), len(self.pairs)
            )
            self.pairs.append(pair)
            self._by_sites[key] = pair
        return self._by_sites[key]

    def lattice(self) -> Lattice:
        modes = list(self.base.modes)
        for p in self.pairs:
            modes.extend(p.modes())
        return Lattice(self.base.extents, self.base.periodic, modes)

    def ordering(self) -> Ordering:
        return row_major_ordering(self.lattice())

    def ancillas_per_site(self) -> dict[tuple, int]:
        counts: dict[tuple, int] = {}
        for p in self.pairs:
            for m in p.modes():
                counts[m.site] = counts.get(m.site, 0) + 1
        return counts

    def to_json(self) -> str:
        ordn = self.ordering()
        rows = [
            {
                "pair_id": p.pair_id,
                "site_x": list(p.site_x),
                "site_y": list(p.site_y),
                "pi_positions": [ordn.position(p.c_at_x), ordn.position(p.c_at_y)],
            }
            for p in self.pairs
        ]
        return json.dumps(rows, sort_keys=True)


# ---------------------------------------------------------------------------

def majorana_op(anc: Mode, ordering: Ordering):
    """m = c + c^dag: self-adjoint, m^2 = I, anticommutes with other modes."""
    if anc.kind != ModeKind.ANCILLA:
        raise DomainError(f"{anc} is not an ancilla mode")
    return fock.creation_matrix(anc, ordering) + fock.annihilation_matrix(anc, ordering)


def m_symbolic(anc: Mode) -> SymbolicOperator:
    return SymbolicOperator.create(anc) + SymbolicOperator.annihilate(anc)


def pair_M_symbolic(pair: AncillaPair) -> SymbolicOperator:
    """M_(x,y) = i m_(x,y) m_(y,x); self-adjoint with eigenvalues +-1."""
    return 1j * m_symbolic(pair.c_at_x) * m_symbolic(pair.c_at_y)


def substitute(term: SymbolicOperator, pair: AncillaPair,
               ordering: Ordering | None = None, lattice: Lattice | None = None,
               flagged: bool | None = None) -> SymbolicOperator:
    """Insert i m_x m_y between the x-part and y-part of a flagged monomial.

    Handles the quadratic hopping pattern and the quoted quartic pattern
    (one M per adjacent site-pair of factors); other shapes are rejected
    since the insertion position is not specified for them.
    """
    if len(term.terms) != 1:
        raise DomainError("substitute expects a single monomial")
    (mono, coeff), = term.terms.items()
    if flagged is None:
        if ordering is None or lattice is None:
            raise DomainError("pass `flagged` or an ordering and lattice")
        flagged = not jw_locality_report(term, ordering, lattice).all_local
    if not flagged:
        warnings.warn("term is already qubit-local; substitution skipped")
        return term
    n_physical = sum(1 for m, _ in mono if m.kind != ModeKind.ANCILLA)
    if n_physical not in (2, 4):
        raise DomainError(
            "only quadratic terms and the quartic two-pair pattern are supported"
        )
    sites = {pair.site_x, pair.site_y}
    hits = [
        i for i, (m, _) in enumerate(mono)
        if m.site in sites and m.kind != ModeKind.ANCILLA
    ]
    if len(hits) != 2 or hits[1] != hits[0] + 1:
        raise DomainError(
            "the pair's sites must match exactly two adjacent factors of the monomial"
        )
    i = hits[0] + 1
    left = SymbolicOperator.monomial(mono[:i], coeff)
    right = SymbolicOperator.monomial(mono[i:])
    return left * pair_M_symbolic(pair) * right


def prepare_plus_state(pairs, ordering: Ordering) -> np.ndarray:
    """prod (1/sqrt2)(m_(x,y) - i m_(y,x)) |vac>: +1 eigenstate of every M."""
    seen = set()
    for p in pairs:
        k = set(p.modes())
        if seen & k:
            raise DomainError(
                "overlapping ancilla pairs: their M operators would not commute"
            )
        seen |= k
    psi = fock.vacuum(ordering)
    for p in sorted(pairs, key=lambda p: ordering.position(p.c_at_x)):
        mx = majorana_op(p.c_at_x, ordering)
        my = majorana_op(p.c_at_y, ordering)
        psi = (mx @ psi - 1j * (my @ psi)) / np.sqrt(2)
    return psi


# ---------------------------------------------------------------------------
# matrix -> symbolic and qubit-block lowering helpers

def symbolic_from_block(block: np.ndarray, modes) -> SymbolicOperator:
    """Expand a dense block over its modes' normal-ordered monomial basis."""
    modes = list(modes)
    if 4 ** len(modes) > 4096:
        raise ResourceError("monomial expansion over too many modes")
    sub = Ordering(modes)
    columns, monos = [], []
    for choice in np.ndindex(*(4,) * len(modes)):
        term = SymbolicOperator.identity()
        for mode, c in zip(modes, choice):
            if c == 1:
                term = term * SymbolicOperator.create(mode)
            elif c == 2:
                term = term * SymbolicOperator.annihilate(mode)
            elif c == 3:
                term = term * SymbolicOperator.number(mode)
        monos.append(term)
        columns.append(fock.dense(fock.lower(term, sub)).ravel())
    a = np.column_stack(columns)
    coef, *_ = np.linalg.lstsq(a, np.asarray(block, np.complex128).ravel(), rcond=None)
    out = SymbolicOperator()
    for c, term in zip(coef, monos):
        if abs(c) > 1e-13:
            out = out + complex(c) * term
    return out


def block_via_jw(sym: SymbolicOperator, ordering: Ordering) -> BlockOperator:
    """Lower through the Pauli picture onto the exact JW support qubits.

    Works for non-contiguous supports (post-repair operators), where the
    interval lowering of contiguous even blocks does not apply.
    """
    ps = jw(sym, ordering).canonicalize()
    supp = tuple(sorted({q for t in ps.terms for q in t.letters}))
    dim = 1 << len(supp)
    block = np.zeros((dim, dim), dtype=np.complex128)
    for t in ps.terms:
        m = np.eye(1, dtype=np.complex128) * t.coefficient
        for q in reversed(supp):
            m = np.kron(m, LETTERS[t.letters.get(q, "I")])
        block += m
    return BlockOperator(block, supp, ordering.n_modes)


# ---------------------------------------------------------------------------
# locality repair of whole factors

class RepairResult:
    """A repaired factor set plus the extended system it lives on."""

    def __init__(self, factors, registry, lattice, ordering, residuals):
        self.factors = factors
        self.registry = registry
        self.lattice = lattice
        self.ordering = ordering
        self.residuals = residuals

    @property
    def pairs(self):
        return self.registry.pairs


def _factor_generator(factor, ordering: Ordering) -> SymbolicOperator:
    op = factor.op.sorted_support()
    modes = [ordering.mode_at(q) for q in op.qubits]
    h_block = principal_generator(op.block)
    sym = symbolic_from_block(h_block, modes)
    odd = sum(1 for mono in sym.terms if len(mono) % 2)
    if odd:
        odd_part, _ = parity_split(h_block)
        if spectral_norm(odd_part) > 1e-9:
            raise ContractError(
                f"factor {factor} is not the exponential of an even generator"
            )
        sym = SymbolicOperator(
            {m: c for m, c in sym.terms.items() if len(m) % 2 == 0}
        )
    return sym


def localize_factors(factors, ordering: Ordering, lattice: Lattice,
                     tol: float = 1e-10, verify: bool = True) -> RepairResult:
    """Repair every flagged monomial of every factor's generator.

    Returns factors re-lowered on the extended system (ancilla modes placed
    right after their host sites' modes). Each repaired factor is certified:
    its qubit support stays inside its neighborhood's image, and (with
    `verify`, which needs a dense build) its action through the
    +1-eigenspace embedding matches the original factor.
    """
    registry = AncillaRegistry(lattice)
    gens = [
        f.generator if getattr(f, "generator", None) is not None
        else _factor_generator(f, ordering)
        for f in factors
    ]

    # first pass: allocate pairs for all flagged monomials
    repaired_gens = []
    for f, g in zip(factors, gens):
        report = jw_locality_report(g, ordering, lattice)
        new = SymbolicOperator()
        for entry in report.entries:
            t = SymbolicOperator.monomial(entry.monomial, entry.coefficient)
            if entry.local_on_sites:
                new = new + t
                continue
            new = new + _repair_monomial(t, registry)
        repaired_gens.append(new)

    if not registry.pairs:  # nothing was flagged: factors stand as they are
        return RepairResult(list(factors), registry, lattice, ordering,
                            [0.0] * len(factors))

    ext_lattice = registry.lattice()
    ext_ordering = registry.ordering()
    new_factors, residuals = [], []
    for f, g in zip(factors, repaired_gens):
        blk = block_via_jw(g, ext_ordering)
        region = Region(ext_lattice, f.support_region.sites)
        nbh_sites = set()
        for s in region.sites:
            nbh_sites |= ext_lattice.neighborhood(s)
        allowed = set(ext_ordering.region_qubits(nbh_sites))
        if not set(blk.qubits) <= allowed:
            raise ContractError(
                f"repaired factor {f} still leaks outside its neighborhood"
            )
        op = BlockOperator(expm(-1j * blk.block), blk.qubits, ext_ordering.n_modes)
        nf = type(f)(op, region, f.tag, f.mode, generator=g)
        res = float("nan")
        if verify and f.op is not None:
            res = equivalence_residual(f, nf, registry, ordering, ext_ordering)
            if res > tol:
                raise ContractError(
                    f"repaired factor {f} deviates on the +1 eigenspace ({res:.3e})"
                )
            nf.residual = res
        new_factors.append(nf)
        residuals.append(res)
    return RepairResult(new_factors, registry, ext_lattice, ext_ordering, residuals)


def localize(factor, ordering: Ordering, lattice: Lattice, tol: float = 1e-10):
    """Single-factor repair; returns (qubit-local factor, new ancilla pairs)."""
    result = localize_factors([factor], ordering, lattice, tol)
    return result.factors[0], result.pairs


def _repair_monomial(term: SymbolicOperator, registry: AncillaRegistry) -> SymbolicOperator:
    (mono, _), = term.terms.items()
    site_seq = [m.site for m, _ in mono]
    if len(mono) == 2:
        groups = [(0, site_seq[0], site_seq[1])]
    elif len(mono) == 4:
        groups = [(0, site_seq[0], site_seq[1]), (2, site_seq[2], site_seq[3])]
    else:
        raise DomainError(
            "monomial order not supported: the M-insertion position is only "
            "specified for quadratic and the quoted quartic pattern"
        )
    out = term
    for _, sx, sy in groups:
        if sx == sy:
            continue
        pair = registry.pair_for(sx, sy)
        out_new = SymbolicOperator()
        for m2, c2 in out.terms.items():
            out_new = out_new + substitute(
                SymbolicOperator.monomial(m2, c2), pair, flagged=True
            )
        out = out_new
    return out


def embedding_isometry(registry: AncillaRegistry, base_ordering: Ordering,
                       ext_ordering: Ordering) -> np.ndarray:
    """J: base Fock space -> extended Fock space with ancillas in the joint
    +1 eigenstate. J = (plus-state product) o (occupation embedding)."""
    nb, ne = base_ordering.n_modes, ext_ordering.n_modes
    fock.check_size(ne)
    positions = [ext_ordering.position(m) for m in base_ordering.modes]
    src = np.arange(1 << nb, dtype=np.int64)
    tgt = np.zeros_like(src)
    for k, p in enumerate(positions):
        tgt |= ((src >> k) & 1) << p
    e = np.zeros((1 << ne, 1 << nb), dtype=np.complex128)
    e[tgt, src] = 1.0
    for p in sorted(registry.pairs, key=lambda p: ext_ordering.position(p.c_at_x)):
        mx = majorana_op(p.c_at_x, ext_ordering)
        my = majorana_op(p.c_at_y, ext_ordering)
        e = (mx @ e - 1j * (my @ e)) / np.sqrt(2)
    return e


def equivalence_residual(factor, repaired, registry: AncillaRegistry,
                         base_ordering: Ordering, ext_ordering: Ordering) -> float:
    """|| V' J - J V ||: the repaired factor must act like the original on
    physical states dressed with the +1 ancilla eigenstate."""
    j = embedding_isometry(registry, base_ordering, ext_ordering)
    v = factor.op.to_dense()
    vj = repaired.op.apply_left(j)
    return spectral_norm(vj - j @ v)
