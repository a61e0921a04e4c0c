"""Dense linear-algebra helpers shared across modules."""

from __future__ import annotations

import numpy as np
import scipy.linalg


def spectral_norm(a: np.ndarray) -> float:
    """Largest singular value (exact SVD)."""
    if a.size == 0:
        return 0.0
    return float(np.linalg.norm(np.asarray(a), 2))


def opnorm_estimate(apply, apply_h, dim: int, iters: int = 30, seed: int = 11) -> float:
    """Spectral norm of a linear operator given only its action.

    Power iteration on A^H A from a seeded random start; converges to the
    largest singular value almost surely. Used where the operator is cheap
    to apply but expensive to materialize.
    """
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    v /= np.linalg.norm(v)
    sigma = 0.0
    for _ in range(iters):
        w = apply_h(apply(v))
        nw = np.linalg.norm(w)
        if nw == 0.0:
            return 0.0
        new_sigma = np.sqrt(nw)
        v = w / nw
        if abs(new_sigma - sigma) <= 1e-2 * max(new_sigma, 1e-300):
            sigma = new_sigma
            break
        sigma = new_sigma
    return float(sigma)


def is_unitary(u: np.ndarray, tol: float = 1e-10) -> bool:
    u = np.asarray(u)
    return spectral_norm(u.conj().T @ u - np.eye(u.shape[0])) <= tol


def principal_generator(u: np.ndarray) -> np.ndarray:
    """Self-adjoint H with U = exp(-iH) and eigenphases of H in (-pi, pi].

    The branch is fixed by the principal logarithm; the eigenphase -pi is
    mapped to +pi so the convention is deterministic.
    """
    u = np.asarray(u, dtype=np.complex128)
    vals, vecs = scipy.linalg.schur(u, output="complex")
    lam = np.diag(vals)
    theta = -np.angle(lam)            # U = e^{-iH}: eigenvalue e^{-i theta}
    theta = np.where(np.isclose(theta, -np.pi), np.pi, theta)
    return (vecs * theta) @ vecs.conj().T


def expm(a: np.ndarray) -> np.ndarray:
    return scipy.linalg.expm(np.asarray(a, dtype=np.complex128))


def fidelity(psi: np.ndarray, phi: np.ndarray) -> float:
    """|<psi|phi>| for normalized vectors."""
    return float(abs(np.vdot(psi, phi)))
