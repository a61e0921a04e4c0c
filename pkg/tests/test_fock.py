"""Occupation-basis operators: exact CAR, lowering, parity, the Hubbard oracle."""

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fermiqca import fock
from fermiqca.lattice import Mode, chain, row_major_ordering
from fermiqca.symbolic import SymbolicOperator as S
from fermiqca.symbolic import hubbard_hamiltonian


def line(n):
    lat = chain(n, labels=1, periodic=False)
    return lat, row_major_ordering(lat)


def test_single_mode_creation_matrix():
    _, ordn = line(1)
    c = fock.dense(fock.creation_matrix(ordn.mode_at(0), ordn))
    assert np.array_equal(c, [[0, 0], [1, 0]])


def test_antisymmetry_of_two_creations():
    _, ordn = line(2)
    m0, m1 = ordn.modes
    vac = fock.vacuum(ordn)
    c0 = fock.creation_matrix(m0, ordn)
    c1 = fock.creation_matrix(m1, ordn)
    up = c1 @ (c0 @ vac)      # a^_1 a^_0 |vac> ... applied right to left
    down = c0 @ (c1 @ vac)
    assert up[0b11] == 1 and down[0b11] == -1 or up[0b11] == -1 and down[0b11] == 1
    # a^_1 a^_0 |vac> = -a^_0 a^_1 |vac>
    assert np.array_equal(up, -down)


def test_car_exact_all_pairs():
    _, ordn = line(6)
    eye = np.eye(64)
    for i, j in itertools.product(range(6), repeat=2):
        ai = fock.dense(fock.annihilation_matrix(ordn.mode_at(i), ordn))
        aj = fock.dense(fock.annihilation_matrix(ordn.mode_at(j), ordn))
        cj = fock.dense(fock.creation_matrix(ordn.mode_at(j), ordn))
        assert np.max(np.abs(ai @ aj + aj @ ai)) == 0.0
        target = eye if i == j else 0.0
        assert np.max(np.abs(ai @ cj + cj @ ai - target)) == 0.0


def test_creation_squares_to_zero():
    _, ordn = line(4)
    for m in ordn.modes:
        c = fock.dense(fock.creation_matrix(m, ordn))
        assert np.max(np.abs(c @ c)) == 0.0


def test_vacuum():
    _, ordn = line(2)
    assert np.array_equal(fock.vacuum(ordn), [1, 0, 0, 0])
    _, ordn4 = line(4)
    vac = fock.vacuum(ordn4)
    assert np.linalg.norm(vac) == 1.0
    for m in ordn4.modes:
        assert np.max(np.abs(fock.annihilation_matrix(m, ordn4) @ vac)) == 0.0


def test_lower_number_operator_and_identity():
    _, ordn = line(1)
    n_op = fock.dense(fock.lower(S.number(ordn.mode_at(0)), ordn))
    assert np.array_equal(n_op, np.diag([0, 1]))
    ident = fock.dense(fock.lower(S.identity(), ordn))
    assert np.array_equal(ident, np.eye(2))


def _hubbard_bruteforce(n_sites, alpha, u):
    """Independent oracle: assemble H entrywise over explicit occupation
    tuples (site-major, spin-minor bit layout matching the package)."""
    n_modes = 2 * n_sites
    dim = 1 << n_modes

    def occ(state, site, spin):
        return (state >> (2 * site + spin)) & 1

    def apply_ladder(state, pos, create):
        if ((state >> pos) & 1) == (1 if create else 0):
            return None, 0
        sign = (-1) ** bin(state & ((1 << pos) - 1)).count("1")
        return state ^ (1 << pos), sign

    h = np.zeros((dim, dim), dtype=complex)
    for state in range(dim):
        # on-site repulsion
        for site in range(n_sites):
            if occ(state, site, 0) and occ(state, site, 1):
                h[state, state] += u
        # hopping: open line, both directions, both spins
        for site in range(n_sites - 1):
            for spin in range(2):
                for src, dst in ((site, site + 1), (site + 1, site)):
                    mid, s1 = apply_ladder(state, 2 * src + spin, create=False)
                    if mid is None:
                        continue
                    out, s2 = apply_ladder(mid, 2 * dst + spin, create=True)
                    if out is None:
                        continue
                    h[out, state] += -alpha * s1 * s2
    return h


def test_hubbard_against_bruteforce_oracle():
    lat = chain(2, labels=2, periodic=False)
    ordn = row_major_ordering(lat)
    sym = hubbard_hamiltonian(lat, hopping=1.0, onsite_u=2.0)
    h = fock.dense(fock.lower(sym, ordn))
    assert np.max(np.abs(h - h.conj().T)) < 1e-14
    oracle = _hubbard_bruteforce(2, 1.0, 2.0)
    assert np.max(np.abs(h - oracle)) < 1e-12


@settings(max_examples=30, deadline=None)
@given(st.data())
def test_lower_is_a_product_homomorphism(data):
    _, ordn = line(3)
    def rand_sym():
        k = data.draw(st.integers(1, 3))
        mono = tuple(
            (ordn.mode_at(data.draw(st.integers(0, 2))), data.draw(st.booleans()))
            for _ in range(k)
        )
        re = data.draw(st.floats(-2, 2, allow_nan=False))
        return S.monomial(mono, complex(re, 0.5))

    a, b = rand_sym(), rand_sym()
    lhs = fock.dense(fock.lower(a * b, ordn))
    rhs = fock.dense(fock.lower(a, ordn)) @ fock.dense(fock.lower(b, ordn))
    assert np.max(np.abs(lhs - rhs)) < 1e-12


def test_global_parity():
    _, ordn = line(4)
    p = fock.dense(fock.parity_operator(4))
    assert np.array_equal(p @ p, np.eye(16))
    for m in ordn.modes:
        a = fock.dense(fock.annihilation_matrix(m, ordn))
        assert np.max(np.abs(p @ a @ p + a)) == 0.0


def test_mode_permutation_unitary():
    _, ordn = line(3)
    u = fock.dense(fock.mode_permutation_unitary([1, 2, 0], 3))
    assert np.allclose(u @ u.conj().T, np.eye(8))
    for k, tgt in enumerate([1, 2, 0]):
        c = fock.dense(fock.creation_matrix(ordn.mode_at(k), ordn))
        ct = fock.dense(fock.creation_matrix(ordn.mode_at(tgt), ordn))
        assert np.max(np.abs(u @ c @ u.conj().T - ct)) == 0.0


def test_dense_cap(monkeypatch):
    monkeypatch.setenv("FERMIQCA_MAX_MODES", "4")
    _, ordn = line(5)
    with pytest.raises(fock.FockSizeError, match="override"):
        fock.vacuum(ordn)


def test_lower_unknown_mode_raises():
    _, ordn = line(2)
    stray = Mode((7,), 0)
    with pytest.raises(KeyError, match="not in the ordering"):
        fock.lower(S.create(stray), ordn)
