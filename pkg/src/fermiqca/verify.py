"""Named verification suites behind `fermiqca verify --suite ...`.

Each suite returns a list of check rows {name, residual, tol, pass}; a
suite passes when every row does. All randomness is seeded through the
counter-based Philox generator, so reports are byte-identical across runs.
"""

from __future__ import annotations

import numpy as np

from . import fock
from .causality import (
    causality_report,
    check_lemma1,
    heisenberg_image,
    is_causal,
    parity_split,
)
from .circuit import circuit_unitary, parity_ladder, simulate
from .decomposition import (
    DoubledSystem,
    factorization_residual,
    pairwise_commutator_norms,
    theorem1_factorize,
)
from .dirac1d import DiracParams, build_T, dirac_lattice, dirac_ordering
from .ensembles import random_causal_step, random_state, rng
from .errors import DomainError
from .lattice import chain, row_major_ordering
from .linalg import spectral_norm
from .symbolic import SymbolicOperator

SUITES = (
    "car", "jw", "causality", "theorem1", "lemma1", "lemma2",
    "majorana", "circuit", "endtoend",
)


def _check(name: str, residual: float, tol: float) -> dict:
    return {
        "name": name,
        "residual": float(residual),
        "tol": float(tol),
        "pass": bool(residual <= tol),
    }


def _bool_check(name: str, ok: bool) -> dict:
    return {"name": name, "residual": 0.0 if ok else 1.0, "tol": 0.0, "pass": bool(ok)}


def _theorem1_system(modes: int):
    if modes % 3 != 0 or modes < 3:
        raise DomainError("theorem1 suites use a 3-site line: modes must be 3k")
    base = chain(3, labels=modes // 3, periodic=False)
    return base, DoubledSystem(base)


def suite_car(modes: int, seed: int, tol: float | None = None) -> list[dict]:
    lat = chain(modes, labels=1, periodic=False)
    ordn = row_major_ordering(lat)
    eye = np.eye(1 << modes)
    worst_aa = 0.0
    worst_ad = 0.0
    for i in range(modes):
        ai = fock.dense(fock.annihilation_matrix(ordn.mode_at(i), ordn))
        for j in range(modes):
            aj = fock.dense(fock.annihilation_matrix(ordn.mode_at(j), ordn))
            adj = fock.dense(fock.creation_matrix(ordn.mode_at(j), ordn))
            aa = ai @ aj + aj @ ai
            ad = ai @ adj + adj @ ai - (eye if i == j else 0.0)
            worst_aa = max(worst_aa, float(np.max(np.abs(aa))))
            worst_ad = max(worst_ad, float(np.max(np.abs(ad))))
    rows = [
        _check("{a_i,a_j} = 0 exactly", worst_aa, 0.0),
        _check("{a_i,a^_j} = delta_ij exactly", worst_ad, 0.0),
    ]
    sq = 0.0
    for i in range(modes):
        c = fock.dense(fock.creation_matrix(ordn.mode_at(i), ordn))
        sq = max(sq, float(np.max(np.abs(c @ c))))
    rows.append(_check("a^2 = 0 exactly", sq, 0.0))
    return rows


def suite_jw(modes: int, seed: int, tol: float | None = None) -> list[dict]:
    from .jwmap import jw

    tol = 1e-13 if tol is None else tol
    lat = chain(modes, labels=1, periodic=False)
    ordn = row_major_ordering(lat)
    gen = rng(seed)
    worst = 0.0
    for _ in range(200):
        k = int(gen.integers(1, 5))
        factors = tuple(
            (ordn.mode_at(int(gen.integers(0, modes))), bool(gen.integers(0, 2)))
            for _ in range(k)
        )
        coeff = complex(gen.standard_normal(), gen.standard_normal())
        sym = SymbolicOperator.monomial(factors, coeff)
        a = fock.dense(fock.lower(sym, ordn))
        b = fock.dense(jw(sym, ordn).matrix(modes))
        worst = max(worst, float(np.max(np.abs(a - b))))
    return [_check("matrix(jw(A)) == lower(A), 200 monomials", worst, tol)]


def suite_causality(modes: int, seed: int, tol: float | None = None) -> list[dict]:
    tol = 1e-10 if tol is None else tol
    params = DiracParams.from_mass_coupling(3, 0.5)
    lat = dirac_lattice(params)
    ordn = dirac_ordering(lat)
    t = fock.dense(build_T(params, ordn))
    rep = causality_report(t, lat, ordn, tol)
    rows = [_check("1D Dirac shift T is causal", max(r["residual_norm"] for r in rep), tol)]
    lat5 = chain(5, labels=1, periodic=False)
    o5 = row_major_ordering(lat5)
    from .decomposition import fermionic_swap

    sw = fock.dense(fermionic_swap(o5.mode_at(0), o5.mode_at(2), o5))
    rows.append(
        _bool_check(
            "two-site-separated swap detected non-causal",
            not is_causal(sw, lat5, o5, tol),
        )
    )
    rows.append(_bool_check("identity is causal", is_causal(np.eye(32), lat5, o5, tol)))
    return rows


def suite_theorem1(modes: int, seed: int, tol: float | None = None,
                   count: int = 3) -> list[dict]:
    tol = 1e-10 if tol is None else tol
    base, dbl = _theorem1_system(modes)
    rows = []
    for k in range(count):
        gates = random_causal_step(base, dbl.base_ordering, seed=seed + k)
        factors = theorem1_factorize(gates, dbl)
        res = factorization_residual(gates, dbl, factors)
        conj = [f for f in factors if f.tag == "conjugated_swap"]
        comms = pairwise_commutator_norms(conj)
        rows.append(_check(f"instance {k}: ||prod(factors) - U_A U_B^||", res, tol))
        rows.append(
            _check(
                f"instance {k}: conjugated swaps commute",
                max(c for _, _, c in comms),
                1e-12,
            )
        )
        rows.append(
            _check(
                f"instance {k}: localization certificates",
                max(f.residual for f in conj),
                tol,
            )
        )
    return rows


def _lemma_ensemble(modes: int, seed: int, count: int = 4):
    base = chain(3, labels=max(1, modes // 3), periodic=False)
    ordn = row_major_ordering(base)
    from .decomposition import gates_unitary

    for k in range(count):
        gates = random_causal_step(base, ordn, seed=seed + k)
        yield base, ordn, gates_unitary([g.on_ordering(ordn) for g in gates], base.n_modes)


def suite_lemma1(modes: int, seed: int, tol: float | None = None) -> list[dict]:
    tol = 1e-10 if tol is None else tol
    rows = []
    for k, (base, ordn, u) in enumerate(_lemma_ensemble(modes, seed)):
        rep = check_lemma1(u, base, ordn, tol)
        rows.append(
            _check(
                f"instance {k}: inverse causal",
                max(r["residual_norm"] for r in rep["modes"]),
                tol,
            )
        )
    return rows


def suite_lemma2(modes: int, seed: int, tol: float | None = None) -> list[dict]:
    tol = 1e-12 if tol is None else tol
    rows = []
    for k, (base, ordn, u) in enumerate(_lemma_ensemble(modes, seed)):
        worst = 0.0
        for m in ordn.modes:
            _, even = parity_split(heisenberg_image(u, m, ordn))
            worst = max(worst, spectral_norm(even))
        rows.append(_check(f"instance {k}: U^ a U has no even part", worst, tol))
    return rows


def suite_majorana(modes: int, seed: int, tol: float | None = None) -> list[dict]:
    from .majorana import majorana_op, prepare_plus_state, pair_M_symbolic
    from .endtoend import compile_dirac_step

    tol = 1e-10 if tol is None else tol
    params = DiracParams.from_mass_coupling(3, 0.5)
    step = compile_dirac_step(params)
    ordn = step.repair.ordering
    rows = [
        _check(
            "boundary swap repaired: +1-eigenspace equivalence",
            max(r for r in step.repair.residuals if r == r),
            tol,
        )
    ]
    pairs = step.registry.pairs
    psi = prepare_plus_state(pairs, ordn)
    worst = 0.0
    for p in pairs:
        m = fock.dense(fock.lower(pair_M_symbolic(p), ordn))
        worst = max(worst, float(np.linalg.norm(m @ psi - psi)))
    rows.append(_check("prepare_plus_state is a +1 eigenstate", worst, 1e-12))
    mop = fock.dense(majorana_op(pairs[0].c_at_x, ordn))
    rows.append(
        _check("m^2 = I", spectral_norm(mop @ mop - np.eye(mop.shape[0])), 1e-13)
    )
    return rows


def suite_circuit(modes: int, seed: int, tol: float | None = None) -> list[dict]:
    tol = 1e-13 if tol is None else tol
    n = 5  # four targets and one flag
    targets, flag = [0, 1, 2, 3], 4
    lad = parity_ladder(targets, flag, n)
    u = circuit_unitary(lad)
    zf = np.diag([1.0 - 2.0 * ((i >> flag) & 1) for i in range(1 << n)]).astype(complex)
    zall = np.diag(
        [1.0 - 2.0 * (bin(i).count("1") % 2) for i in range(1 << n)]
    ).astype(complex)
    rows = [
        _check("Z_flag o ladder == ladder o Z...Z", spectral_norm(zf @ u - u @ zall), tol),
        _check(
            "ladder o ladder^-1 == identity",
            spectral_norm(circuit_unitary(lad.inverse()) @ u - np.eye(1 << n)),
            tol,
        ),
        _bool_check("ladder gate count == targets", lad.gate_count == len(targets)),
    ]
    gen = rng(seed)
    psi = random_state(n, gen)
    rows.append(
        _check(
            "simulate preserves the norm",
            abs(np.linalg.norm(simulate(lad, psi)) - 1.0),
            1e-12,
        )
    )
    return rows


def suite_endtoend(modes: int, seed: int, tol: float | None = None) -> list[dict]:
    from .endtoend import compile_dirac_step, cross_simulation_fidelity

    tol = 1e-9 if tol is None else tol
    params = DiracParams.from_mass_coupling(3, 0.5)
    step = compile_dirac_step(params)
    gen = rng(seed)
    worst = 0.0
    for _ in range(5):
        psi = random_state(6, gen)
        worst = max(worst, 1.0 - cross_simulation_fidelity(step, 5, psi))
    rows = [_check("5-step circuit vs Fock evolution (1 - fidelity)", worst, tol)]
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        s9 = compile_dirac_step(DiracParams.from_mass_coupling(9, 0.5))
        s15 = compile_dirac_step(DiracParams.from_mass_coupling(15, 0.5))
    rows.append(
        _bool_check(
            "layer count independent of N",
            s9.circuit.layer_count == s15.circuit.layer_count,
        )
    )
    rows.append(
        _bool_check(
            "gate count ratio 15/9",
            s15.circuit.gate_count * 9 == s9.circuit.gate_count * 15,
        )
    )
    return rows


def run_suite(suite: str, modes: int, seed: int, tol: float | None = None) -> dict:
    if suite not in SUITES:
        raise DomainError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    fn = globals()[f"suite_{suite}"]
    checks = fn(modes, seed, tol)
    return {
        "suite": suite,
        "modes": modes,
        "seed": seed,
        "checks": checks,
        "pass": all(c["pass"] for c in checks),
    }
