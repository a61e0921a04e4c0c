"""Majorana ancillas: operator algebra, substitution, state prep, repair."""

import numpy as np
import pytest

from fermiqca import fock
from fermiqca.blockop import BlockOperator
from fermiqca.decomposition import FermionicGate, LocalUnitaryFactor
from fermiqca.errors import ContractError, DomainError
from fermiqca.jwmap import jw, support
from fermiqca.lattice import Mode, ModeKind, Region, chain, grid, row_major_ordering
from fermiqca.linalg import spectral_norm
from fermiqca.majorana import (
    AncillaPair,
    AncillaRegistry,
    embedding_isometry,
    localize,
    localize_factors,
    majorana_op,
    pair_M_symbolic,
    prepare_plus_state,
    substitute,
    symbolic_from_block,
)
from fermiqca.symbolic import SymbolicOperator as S


@pytest.fixture
def ring_with_pair():
    """4-site ring, 1 physical mode per site, one ancilla pair at sites 0, 3."""
    lat = chain(4, labels=1, periodic=True)
    reg = AncillaRegistry(lat)
    pair = reg.pair_for((0,), (3,))
    return lat, reg, pair


def test_majorana_op_properties(ring_with_pair):
    _, reg, pair = ring_with_pair
    ordn = reg.ordering()
    dim = 1 << ordn.n_modes
    m = fock.dense(majorana_op(pair.c_at_x, ordn))
    assert spectral_norm(m - m.conj().T) == 0.0
    assert spectral_norm(m @ m - np.eye(dim)) == 0.0
    for phys in (Mode((1,), 0), Mode((2,), 0)):
        a = fock.dense(fock.annihilation_matrix(phys, ordn))
        assert np.max(np.abs(m @ a + a @ m)) == 0.0
    with pytest.raises(DomainError, match="not an ancilla"):
        majorana_op(Mode((1,), 0), ordn)


def test_pair_M_eigenvalues(ring_with_pair):
    _, reg, pair = ring_with_pair
    ordn = reg.ordering()
    m = fock.dense(fock.lower(pair_M_symbolic(pair), ordn))
    vals = np.linalg.eigvalsh(m)
    assert np.allclose(np.abs(vals), 1.0, atol=1e-13)
    assert spectral_norm(m - m.conj().T) < 1e-14


def test_substitution_acts_identically_on_plus_states(ring_with_pair):
    lat, reg, pair = ring_with_pair
    ordn = reg.ordering()
    term = S.monomial(((Mode((0,), 0), False), (Mode((3,), 0), False)))
    new = substitute(term, pair, ordering=ordn, lattice=reg.lattice())
    assert len(new) == 4  # i (c + c^)(c + c^) expands to four monomials
    proj_plus = _plus_projector(pair, ordn)
    a = fock.dense(fock.lower(term, ordn))
    b = fock.dense(fock.lower(new, ordn))
    assert spectral_norm((b - a) @ proj_plus) < 1e-13


def _plus_projector(pair, ordn):
    m = fock.dense(fock.lower(pair_M_symbolic(pair), ordn))
    return (np.eye(m.shape[0]) + m) / 2


def test_substituted_term_is_qubit_local(ring_with_pair):
    lat, reg, pair = ring_with_pair
    ordn = reg.ordering()
    term = S.monomial(((Mode((0,), 0), True), (Mode((3,), 0), False)))
    assert support(jw(term, ordn)) - set(ordn.region_qubits({(0,), (3,)}))
    new = substitute(term, pair, flagged=True)
    assert support(jw(new, ordn)) <= set(ordn.region_qubits({(0,), (3,)}))


def test_substitute_skips_local_terms(ring_with_pair):
    lat, reg, pair = ring_with_pair
    ordn = reg.ordering()
    local = S.number(Mode((0,), 0))
    with pytest.warns(UserWarning, match="skipped"):
        out = substitute(local * S.identity(), pair, ordering=ordn, lattice=reg.lattice())
    assert out.terms == local.terms


def test_substitute_quartic_pattern():
    lat = grid((2, 2), labels=1, periodic=True)
    reg = AncillaRegistry(lat)
    x, y, w, z = (0, 0), (1, 1), (1, 0), (0, 1)
    quartic = S.monomial((
        (Mode(x, 0), True), (Mode(y, 0), True),
        (Mode(w, 0), False), (Mode(z, 0), False),
    ))
    p1 = reg.pair_for(x, y)
    p2 = reg.pair_for(w, z)
    step1 = substitute(quartic, p1, flagged=True)
    out = S()
    for mono, c in step1.terms.items():
        out = out + substitute(S.monomial(mono, c), p2, flagged=True)
    ordn = reg.ordering()
    proj = _plus_projector(p1, ordn) @ _plus_projector(p2, ordn)
    a = fock.dense(fock.lower(quartic, ordn))
    b = fock.dense(fock.lower(out, ordn))
    assert spectral_norm((b - a) @ proj) < 1e-12


def test_substitute_rejects_higher_order(ring_with_pair):
    _, reg, pair = ring_with_pair
    mono = tuple((Mode((i % 4,), 0), True) for i in range(6))
    with pytest.raises(DomainError, match="quartic"):
        substitute(S.monomial(mono), pair, flagged=True)


def test_prepare_plus_state(ring_with_pair):
    lat, reg, pair = ring_with_pair
    reg.pair_for((1,), (2,))
    ordn = reg.ordering()
    pairs = reg.pairs
    psi = prepare_plus_state(pairs, ordn)
    assert abs(np.linalg.norm(psi) - 1) < 1e-13
    for p in pairs:
        m = fock.dense(fock.lower(pair_M_symbolic(p), ordn))
        assert np.linalg.norm(m @ psi - psi) < 1e-12
    # physical modes unoccupied
    phys_mask = 0
    for k, m in enumerate(ordn.modes):
        if m.kind == ModeKind.PHYSICAL:
            phys_mask |= 1 << k
    idx = np.arange(len(psi))
    assert np.linalg.norm(psi[(idx & phys_mask) != 0]) == 0.0
    # product order is irrelevant for the eigenstate property
    psi2 = prepare_plus_state(list(reversed(pairs)), ordn)
    for p in pairs:
        m = fock.dense(fock.lower(pair_M_symbolic(p), ordn))
        assert np.linalg.norm(m @ psi2 - psi2) < 1e-12
    # adding a physical fermion preserves the eigenstate property
    chi = fock.dense(fock.creation_matrix(Mode((1,), 0), ordn)) @ psi
    for p in pairs:
        m = fock.dense(fock.lower(pair_M_symbolic(p), ordn))
        assert np.linalg.norm(m @ chi - chi) < 1e-12


def test_prepare_plus_rejects_overlap():
    lat = chain(3, labels=1, periodic=True)
    reg = AncillaRegistry(lat)
    p1 = reg.pair_for((0,), (1,))
    shared = AncillaPair(p1.c_at_x, Mode((2,), 0, ModeKind.ANCILLA), 9)
    with pytest.raises(DomainError, match="would not commute"):
        prepare_plus_state([p1, shared], reg.ordering())


def test_M_operators_with_disjoint_pairs_commute():
    lat = chain(4, labels=1, periodic=True)
    reg = AncillaRegistry(lat)
    p1 = reg.pair_for((0,), (3,))
    p2 = reg.pair_for((1,), (2,))
    ordn = reg.ordering()
    m1 = fock.dense(fock.lower(pair_M_symbolic(p1), ordn))
    m2 = fock.dense(fock.lower(pair_M_symbolic(p2), ordn))
    assert np.max(np.abs(m1 @ m2 - m2 @ m1)) == 0.0


def test_symbolic_from_block_roundtrip(rng):
    lat = chain(2, labels=1, periodic=False)
    ordn = row_major_ordering(lat)
    h = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    sym = symbolic_from_block(h, ordn.modes)
    assert np.allclose(fock.dense(fock.lower(sym, ordn)), h, atol=1e-12)


def test_localize_boundary_swap_dirac():
    from fermiqca.dirac1d import DiracParams, dirac_lattice, dirac_ordering, swap_decompose_T

    params = DiracParams.from_mass_coupling(3, 0.5)
    lat = dirac_lattice(params)
    ordn = dirac_ordering(lat)
    factors = swap_decompose_T(params, ordn)
    result = localize_factors(factors, ordn, lat)
    assert len(result.pairs) == 1
    pair = result.pairs[0]
    assert {pair.site_x, pair.site_y} == {(0,), (2,)}
    assert max(r for r in result.residuals) < 1e-10
    # every repaired factor is qubit-local on its own sites
    for f in result.factors:
        assert set(f.op.qubits) <= set(result.ordering.region_qubits(f.support_region.sites))


def test_localize_returns_local_factor_unchanged():
    lat = chain(3, labels=2, periodic=True)
    ordn = row_major_ordering(lat)
    gen = 0.3 * (S.create(Mode((1,), 0)) * S.annihilate(Mode((1,), 1))
                 + S.create(Mode((1,), 1)) * S.annihilate(Mode((1,), 0)))
    fac = LocalUnitaryFactor(
        FermionicGate(gen, ordn).block, Region(lat, {(1,)}), "onsite",
        Mode((1,), 0), generator=gen,
    )
    out, pairs = localize(fac, ordn, lat)
    assert out is fac and pairs == []


def test_localize_torus_hopping():
    lat = grid((2, 2), labels=1, periodic=True)
    ordn = row_major_ordering(lat)
    hop = S.create(Mode((0, 0), 0)) * S.annihilate(Mode((1, 0), 0))
    gen = 0.4 * (hop + hop.dagger())
    fac = LocalUnitaryFactor(
        FermionicGate(gen, ordn).block, Region(lat, {(0, 0), (1, 0)}), "onsite",
        Mode((0, 0), 0), generator=gen,
    )
    repaired, pairs = localize(fac, ordn, lat)
    assert len(pairs) == 1
    assert repaired.residual < 1e-10


def test_localize_rejects_odd_generator_factor():
    lat = chain(2, labels=1, periodic=False)
    ordn = row_major_ordering(lat)
    odd = fock.dense(fock.lower(
        S.create(ordn.mode_at(0)) + S.annihilate(ordn.mode_at(0)), ordn))
    import scipy.linalg

    u = scipy.linalg.expm(-1j * 0.3 * odd)
    fac = LocalUnitaryFactor(
        BlockOperator(u, (0, 1), 2), Region(lat, {(0,), (1,)}), "onsite", ordn.mode_at(0)
    )
    with pytest.raises(ContractError, match="even generator"):
        localize_factors([fac], ordn, lat)


def test_order_independence_of_overlapping_repaired_factors():
    """Commuting conjugated-swap factors stay order-independent on the +1
    eigenspace after repair, even though the repaired matrices themselves no
    longer commute (they share one Majorana pair across the ring wrap)."""
    from fermiqca.decomposition import DoubledSystem

    base = chain(3, labels=1, periodic=True)
    dbl = DoubledSystem(base)
    a1, a2 = base.modes[1], base.modes[2]
    b = [dbl.copy_of(m) for m in base.modes]
    combo1 = (S.annihilate(b[0]) + S.annihilate(b[2])) * (1 / np.sqrt(2))
    combo2 = (S.annihilate(b[0]) - S.annihilate(b[2])) * (1 / np.sqrt(2))

    def swap_like(a_mode, combo):
        d = combo - S.annihilate(a_mode)
        return (np.pi / 2) * (d.dagger() * d)

    facs = []
    for a_mode, combo in ((a1, combo1), (a2, combo2)):
        gen = swap_like(a_mode, combo)
        facs.append(LocalUnitaryFactor(
            FermionicGate(gen, dbl.ordering).block,
            Region(dbl.lattice, dbl.lattice.sites), "conjugated_swap",
            a_mode, generator=gen,
        ))
    # the fermionic originals commute: the swapped mode pairs are orthogonal
    u1, u2 = (f.op.to_dense() for f in facs)
    assert spectral_norm(u1 @ u2 - u2 @ u1) < 1e-12

    result = localize_factors(facs, dbl.ordering, dbl.lattice)
    assert len(result.pairs) == 1  # the shared (0,)<->(2,) wrap pair
    f1, f2 = result.factors
    j = embedding_isometry(result.registry, dbl.ordering, result.ordering)
    ab = f1.op.apply_left(f2.op.apply_left(j))
    ba = f2.op.apply_left(f1.op.apply_left(j))
    assert spectral_norm(ab - ba) < 1e-10
    # ... although as plain matrices the repaired factors do not commute
    v1 = f1.op.to_dense()
    v2 = f2.op.to_dense()
    assert spectral_norm(v1 @ v2 - v2 @ v1) > 1e-3


def test_ancillas_per_site_bound():
    lat = grid((3, 3), labels=1, periodic=True)
    reg = AncillaRegistry(lat)
    center = (1, 1)
    for nb in sorted(lat.neighborhood(center) - {center}):
        reg.pair_for(center, nb)
    counts = reg.ancillas_per_site()
    bound = 2 * len(lat.neighborhood(center))
    assert max(counts.values()) <= bound


def test_registry_json(ring_with_pair):
    _, reg, pair = ring_with_pair
    import json

    rows = json.loads(reg.to_json())
    assert rows == [
        {"pair_id": 0, "site_x": [0], "site_y": [3],
         "pi_positions": [reg.ordering().position(pair.c_at_x),
                          reg.ordering().position(pair.c_at_y)]}
    ]
    # ancilla sits right after its host site's physical modes
    assert reg.ordering().position(pair.c_at_x) == 1
