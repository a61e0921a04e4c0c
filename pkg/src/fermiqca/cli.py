"""Command-line front end: verification suites, model sweeps, circuit
compilation, and the non-causality demo.

Exit codes: 0 all checks pass, 1 an assertion failed, 2 usage error.
Identical arguments and seed produce byte-identical reports and CSVs
(floats are written in shortest round-trip form, randomness is
counter-based Philox).
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import verify as verify_mod
from .dirac1d import DiracParams, continuum_error, dispersion_omega
from .errors import DomainError
from .noncausal import HoppingChain, leakage_table
from .weyl3d import (
    Weyl3DParams,
    dirac3d_continuum_error,
    weyl_continuum_error,
    weyl_eigenphases,
)


def _fmt(x) -> str:
    """Shortest round-trip decimal form of a float."""
    return repr(float(x))


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _parse_eps(expr: str) -> list[float]:
    return [float(x) for x in expr.split(",") if x]


def _parse_triple(expr: str) -> np.ndarray:
    parts = [float(x) for x in expr.split(",")]
    if len(parts) != 3:
        raise DomainError("expected three comma-separated components")
    return np.asarray(parts)


# ---------------------------------------------------------------------------

def cmd_verify(args) -> int:
    try:
        report = verify_mod.run_suite(args.suite, args.modes, args.seed, args.tol)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    _write(args.out, text)
    return 0 if report["pass"] else 1


def cmd_dirac(args) -> int:
    lines: list[str] = []
    if args.variant == "dispersion1d":
        params = DiracParams.from_mass_coupling(args.sites, args.mass_coupling)
        lines.append(f"# dispersion1d sites={args.sites} M={_fmt(args.mass_coupling)}")
        lines.append("k,p,M,omega")
        n = args.sites
        for k in range(-(n - 1) // 2, (n - 1) // 2 + 1):
            p = 2 * np.pi * k / n
            w = dispersion_omega(p, params.mass_coupling)
            lines.append(f"{k},{_fmt(p)},{_fmt(params.mass_coupling)},{_fmt(w)}")
    elif args.variant == "converge1d":
        epss = _parse_eps(args.eps)
        lines.append(
            f"# converge1d m={_fmt(args.mass)} p={_fmt(args.momentum)} t={_fmt(args.time)}"
        )
        lines.append("epsilon,steps,error")
        with ThreadPoolExecutor(max_workers=2) as pool:
            errs = list(
                pool.map(
                    lambda e: continuum_error(args.mass, args.momentum, args.time, e),
                    epss,
                )
            )
        for e, err in zip(epss, errs):
            lines.append(f"{_fmt(e)},{int(round(args.time / e))},{_fmt(err)}")
    elif args.variant in ("converge3d-weyl", "converge3d-dirac"):
        p = _parse_triple(args.momentum3)
        epss = _parse_eps(args.eps)
        name = args.variant.split("-")[1]
        lines.append(
            f"# converge3d-{name} m={_fmt(args.mass)} p={args.momentum3} t={_fmt(args.time)}"
        )
        lines.append("epsilon,steps,error")
        if args.variant == "converge3d-weyl":
            fn = lambda e: weyl_continuum_error(p, args.time, e)  # noqa: E731
        else:
            fn = lambda e: dirac3d_continuum_error(p, args.mass, args.time, e)  # noqa: E731
        with ThreadPoolExecutor(max_workers=2) as pool:
            errs = list(pool.map(fn, epss))
        for e, err in zip(epss, errs):
            lines.append(f"{_fmt(e)},{int(round(args.time / e))},{_fmt(err)}")
    elif args.variant == "dispersion3d":
        params = Weyl3DParams(args.sites)
        lines.append(f"# dispersion3d sites={args.sites}")
        lines.append("k1,k2,k3,omega_plus,omega_minus")
        n = args.sites
        ks = range(-(n - 1) // 2, (n - 1) // 2 + 1)
        for k1 in ks:
            for k2 in ks:
                for k3 in ks:
                    p = 2 * np.pi * np.array([k1, k2, k3]) / n
                    wp, wm = weyl_eigenphases(p)
                    lines.append(f"{k1},{k2},{k3},{_fmt(wp)},{_fmt(wm)}")
    else:  # pragma: no cover - argparse restricts choices
        return 2
    _write(args.out, "\n".join(lines) + "\n")
    return 0


def cmd_compile(args) -> int:
    from .circuit import circuit_to_json
    from .endtoend import compile_dirac_step, cross_simulation_fidelity
    from .ensembles import random_state, rng

    params = DiracParams.from_mass_coupling(args.sites, args.mass_coupling)
    if args.steps == 0:
        from .circuit import Circuit

        payload = circuit_to_json(Circuit(2 * params.sites))
        payload["metadata"] = {
            "model": "dirac1d", "sites": params.sites,
            "mass_coupling": params.mass_coupling, "steps": 0,
            "layer_count": 0, "gate_count": 0,
        }
        _write(args.out, json.dumps(payload, sort_keys=True) + "\n")
        return 0
    import warnings

    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        step = compile_dirac_step(params)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    payload = circuit_to_json(step.circuit)
    payload["metadata"] = {
        "model": "dirac1d",
        "sites": params.sites,
        "mass_coupling": params.mass_coupling,
        "layer_count": step.circuit.layer_count,
        "gate_count": step.circuit.gate_count,
        "ancilla_pairs": len(step.registry.pairs),
        "verified": step.verified,
    }
    if step.verified:
        psi = random_state(2 * params.sites, rng(args.seed))
        payload["metadata"]["step_fidelity"] = cross_simulation_fidelity(step, 1, psi)
    _write(args.out, json.dumps(payload, sort_keys=True) + "\n")
    return 0


def cmd_demo_noncausal(args) -> int:
    chain = HoppingChain(args.sites, hopping=args.alpha)
    ts = _parse_eps(args.time)
    lines = [f"# noncausal sites={args.sites} alpha={_fmt(args.alpha)}", "t,site,amplitude"]
    for t, site, amp in leakage_table(chain, ts):
        lines.append(f"{_fmt(t)},{site},{_fmt(amp)}")
    _write(args.out, "\n".join(lines) + "\n")
    return 0


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="fermiqca",
        description="causal fermions in discrete spacetime: verification and models",
    )
    sub = p.add_subparsers(dest="command", required=True)

    pv = sub.add_parser("verify", help="run a named verification suite")
    pv.add_argument("--suite", required=True)
    pv.add_argument("--modes", type=int, default=6)
    pv.add_argument("--seed", type=int, default=0)
    pv.add_argument("--tol", type=float, default=None)
    pv.add_argument("--out", default=None)
    pv.set_defaults(fn=cmd_verify)

    pd = sub.add_parser("dirac", help="dispersion and continuum-limit sweeps")
    pd.add_argument(
        "variant",
        choices=[
            "dispersion1d", "converge1d", "converge3d-weyl",
            "converge3d-dirac", "dispersion3d",
        ],
    )
    pd.add_argument("--sites", type=int, default=63)
    pd.add_argument("--mass", "--m", dest="mass", type=float, default=1.0)
    pd.add_argument("--mass-coupling", type=float, default=0.5)
    pd.add_argument("--momentum", "--p", dest="momentum", type=float, default=1.0)
    pd.add_argument("--momentum3", "--p3", dest="momentum3", default="1,1,1")
    pd.add_argument("--time", "--t", dest="time", type=float, default=1.0)
    pd.add_argument("--eps", default="0.1,0.05,0.025,0.0125")
    pd.add_argument("--seed", type=int, default=0)
    pd.add_argument("--out", default=None)
    pd.set_defaults(fn=cmd_dirac)

    pc = sub.add_parser("compile", help="compile a model step to a qubit circuit")
    pc.add_argument("model", choices=["dirac1d"])
    pc.add_argument("--sites", type=int, default=3)
    pc.add_argument("--mass-coupling", type=float, default=0.5)
    pc.add_argument("--steps", type=int, default=1)
    pc.add_argument("--seed", type=int, default=0)
    pc.add_argument("--out", default=None)
    pc.set_defaults(fn=cmd_compile)

    pn = sub.add_parser("demo-noncausal", help="instantaneous-leakage CSV")
    pn.add_argument("--sites", type=int, default=9)
    pn.add_argument("--alpha", type=float, default=1.0)
    pn.add_argument("--time", default="0.0001,0.001,0.01")
    pn.add_argument("--out", default=None)
    pn.set_defaults(fn=cmd_demo_noncausal)

    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
