"""Layered local qubit circuits: simulation, scheduling, parity ladders, and
compilation of factorized fermionic evolutions.

Temporal convention: a circuit's layers are applied to states in list order,
and gates inside a layer act on pairwise disjoint qubits, so the circuit's
unitary is ``L_last ... L_first``.
"""

from __future__ import annotations

import json
import math

import numpy as np

from ._kernels import apply_gate
from .errors import CompileError, DomainError
from .lattice import Ordering
from .linalg import spectral_norm

MAX_GATE_QUBITS = 6


class Gate:
    """A unitary on an explicit, ordered tuple of qubits.

    The first listed qubit is the least significant bit of the matrix index.
    """

    __slots__ = ("qubits", "matrix", "name")

    def __init__(self, qubits, matrix, name: str = ""):
        self.qubits = tuple(int(q) for q in qubits)
        self.matrix = np.ascontiguousarray(matrix, dtype=np.complex128)
        self.name = name
        k = len(self.qubits)
        if k > MAX_GATE_QUBITS:
            raise DomainError(f"gate on {k} qubits exceeds the {MAX_GATE_QUBITS}-qubit cap")
        if self.matrix.shape != (1 << k, 1 << k):
            raise DomainError("gate matrix shape does not match qubit count")
        if len(set(self.qubits)) != k:
            raise DomainError("duplicate gate qubits")
        dev = spectral_norm(self.matrix.conj().T @ self.matrix - np.eye(1 << k))
        if dev > 1e-12:
            raise DomainError(f"gate is not unitary (deviation {dev:.2e})")

    def adjoint(self) -> "Gate":
        return Gate(self.qubits, self.matrix.conj().T, name=self.name + "^")

    def __repr__(self):
        return f"Gate({self.name or 'U'}@{self.qubits})"


class Circuit:
    """Layers of disjoint-support gates on a fixed-width qubit register."""

    def __init__(self, num_qubits: int, layers=None):
        self.num_qubits = int(num_qubits)
        self.layers: list[list[Gate]] = [list(l) for l in (layers or [])]
        for layer in self.layers:
            self._check_layer(layer)

    def _check_layer(self, layer):
        used: set[int] = set()
        for g in layer:
            if max(g.qubits, default=-1) >= self.num_qubits:
                raise DomainError("gate qubit exceeds register width")
            if used & set(g.qubits):
                raise DomainError("overlapping gates within one layer")
            used |= set(g.qubits)

    def append_layer(self, gates) -> None:
        layer = list(gates)
        self._check_layer(layer)
        self.layers.append(layer)

    def extend(self, other: "Circuit") -> None:
        if other.num_qubits != self.num_qubits:
            raise DomainError("register width mismatch")
        for layer in other.layers:
            self.append_layer(layer)

    def inverse(self) -> "Circuit":
        inv = Circuit(self.num_qubits)
        for layer in reversed(self.layers):
            inv.append_layer([g.adjoint() for g in layer])
        return inv

    @property
    def gate_count(self) -> int:
        return sum(len(l) for l in self.layers)

    @property
    def layer_count(self) -> int:
        return len(self.layers)

    def __repr__(self):
        return f"Circuit({self.num_qubits} qubits, {self.layer_count} layers, {self.gate_count} gates)"


def simulate(circuit: Circuit, state: np.ndarray) -> np.ndarray:
    """Apply the circuit's layers in order; the schedule inside a layer is
    irrelevant because layer gates act on disjoint qubits."""
    if state.shape[0] != 1 << circuit.num_qubits:
        raise DomainError("state length does not match the register")
    psi = np.asarray(state, dtype=np.complex128)
    for layer in circuit.layers:
        for g in layer:
            psi = apply_gate(psi, g.matrix, g.qubits, circuit.num_qubits)
    return psi


def circuit_unitary(circuit: Circuit) -> np.ndarray:
    """Dense unitary of the whole circuit (small registers only)."""
    dim = 1 << circuit.num_qubits
    u = np.eye(dim, dtype=np.complex128)
    for layer in circuit.layers:
        for g in layer:
            u = apply_gate(u, g.matrix, g.qubits, circuit.num_qubits)
    return u


# ---------------------------------------------------------------------------
# parity ladder (flag-qubit accumulation of a Z string)

def _cnot() -> np.ndarray:
    # qubit order (control, target): index g = c + 2t
    m = np.zeros((4, 4))
    for c in (0, 1):
        for t in (0, 1):
            m[c + 2 * (t ^ c), c + 2 * t] = 1.0
    return m


def parity_ladder(target_qubits, flag_qubit: int, num_qubits: int) -> Circuit:
    """Accumulate the parity of `target_qubits` onto `flag_qubit`.

    One CNOT per target, so after the fragment a single Z on the flag acts
    like the Z-string over the targets; the fragment composed with its own
    inverse is the identity.
    """
    targets = [int(q) for q in target_qubits]
    if flag_qubit in targets:
        raise DomainError("flag qubit overlaps the targets")
    frag = Circuit(num_qubits)
    cnot = _cnot()
    for t in targets:
        frag.append_layer([Gate((t, flag_qubit), cnot, name=f"cnot{t}->{flag_qubit}")])
    return frag


# ---------------------------------------------------------------------------
# Majorana +1 eigenstate preparation (flag-qubit ladders for the JW strings)

_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
_I2 = np.eye(2, dtype=np.complex128)


def _letters_matrix(letters: dict[int, np.ndarray], qubits: tuple[int, ...]) -> np.ndarray:
    out = np.eye(1, dtype=np.complex128)
    for q in reversed(qubits):
        out = np.kron(out, letters.get(q, _I2))
    return out


def prepare_majorana_circuit(pairs, ordering: Ordering) -> Circuit:
    """Circuit creating the joint +1 eigenstate of all Majorana pairs.

    Acts on ``n + 2`` qubits: the register plus two reusable flag qubits
    (returned in |0>). On |0...0> the output equals the Jordan-Wigner image
    of the Fock-space construction prod (1/sqrt2)(m_x - i m_y)|vac>, up to a
    global phase of i per pair. Each pair costs one O(n) pair of parity
    ladders and a single <=4-qubit rotation e^{i pi/2 B}, which is exact
    because B^2 = 1.
    """
    n = ordering.n_modes
    used = set()
    for p in pairs:
        k = {p.c_at_x, p.c_at_y}
        if used & k:
            raise DomainError("overlapping ancilla pairs: their M operators would not commute")
        used |= k
    f1, f2 = n, n + 1
    circ = Circuit(n + 2)
    for p in sorted(pairs, key=lambda p: ordering.position(p.c_at_x)):
        qx, qy = sorted((ordering.position(p.c_at_x), ordering.position(p.c_at_y)))
        string_x = list(range(qx))
        string_mid = list(range(qx + 1, qy))
        ladders = []
        if string_x:
            ladders.append(parity_ladder(string_x, f1, n + 2))
        if string_mid:
            ladders.append(parity_ladder(string_mid, f2, n + 2))
        for lad in ladders:
            circ.extend(lad)
        # B = (X_qx Z_<qx - Y_qy Z_<qy)/sqrt2 with the strings on the flags
        gate_qubits = [qx, qy] + ([f1] if string_x else []) + ([f2] if string_mid else [])
        t1 = {qx: _X}
        t2 = {qy: _Y, qx: _Z}
        if string_x:
            t1[f1] = _Z
            t2[f1] = _Z
        if string_mid:
            t2[f2] = _Z
        qt = tuple(gate_qubits)
        b = (_letters_matrix(t1, qt) - _letters_matrix(t2, qt)) / math.sqrt(2)
        circ.append_layer([Gate(qt, 1j * b, name=f"exp(i pi/2 B){qx},{qy}")])
        for lad in reversed(ladders):
            circ.extend(lad.inverse())
    return circ


# ---------------------------------------------------------------------------
# compilation of local fermionic factors to qubit gates

def compile_factors(factors, ordering: Ordering, commuting: bool = False) -> Circuit:
    """Compile local unitary factors into a layered qubit circuit.

    Each factor must already be qubit-local: its block's qubits must lie
    inside the pi-image of its support region (repair non-local factors with
    :func:`fermiqca.majorana.localize` first). With ``commuting=True``,
    runs of factors sharing a tag are rescheduled by site residue mod 3 per
    axis, the schedule that packs commuting neighborhood factors into a
    lattice-size-independent number of layers.
    """
    n = ordering.n_modes
    gates = []
    for f in factors:
        if f.op is None:
            raise CompileError(
                f"factor {f} has no materialized block; repair it with "
                "majorana.localize_factors before compiling"
            )
        allowed = set(f.support_region.qubits(ordering))
        op = f.op.sorted_support()
        if not set(op.qubits) <= allowed:
            raise CompileError(
                f"factor {f} is not qubit-local: block qubits {sorted(op.qubits)} "
                f"exceed region qubits {sorted(allowed)}"
            )
        anchor = getattr(f, "anchor_site", None) or min(f.support_region.sites)
        gates.append((anchor, f.tag, Gate(op.qubits, op.block, name=f.tag)))

    circ = Circuit(n)
    if not commuting:
        _schedule_asap(circ, [g for _, _, g in gates])
        return circ
    # group consecutive same-tag runs; inside a run order by site residue
    # mod 3 (per axis), the schedule that keeps the layer count independent
    # of the lattice size for radius-1 factors
    i = 0
    while i < len(gates):
        j = i
        while j < len(gates) and gates[j][1] == gates[i][1]:
            j += 1
        run = sorted(
            gates[i:j], key=lambda t: (tuple(c % 3 for c in t[0]), t[0])
        )
        _schedule_asap(circ, [g for _, _, g in run])
        i = j
    return circ


def _schedule_asap(circ: Circuit, gates) -> None:
    start = len(circ.layers)
    for g in gates:
        placed = None
        for li in range(len(circ.layers) - 1, start - 1, -1):
            if any(set(g.qubits) & set(h.qubits) for h in circ.layers[li]):
                placed = li + 1
                break
        if placed is None:
            placed = start
        if placed == len(circ.layers):
            circ.append_layer([g])
        else:
            circ.layers[placed].append(g)
            circ._check_layer(circ.layers[placed])


# ---------------------------------------------------------------------------
# JSON serialization: bit-exact round-trip on the canonical form

def circuit_to_json(circ: Circuit) -> dict:
    return {
        "num_qubits": circ.num_qubits,
        "layers": [
            [
                {
                    "qubits": list(g.qubits),
                    "re": g.matrix.real.tolist(),
                    "im": g.matrix.imag.tolist(),
                }
                for g in layer
            ]
            for layer in circ.layers
        ],
    }


def circuit_from_json(data: dict) -> Circuit:
    circ = Circuit(data["num_qubits"])
    for layer in data["layers"]:
        circ.append_layer(
            [
                Gate(g["qubits"], np.asarray(g["re"]) + 1j * np.asarray(g["im"]))
                for g in layer
            ]
        )
    return circ


def circuit_dumps(circ: Circuit) -> str:
    return json.dumps(circuit_to_json(circ), sort_keys=True, separators=(",", ":"))


def circuit_loads(text: str) -> Circuit:
    return circuit_from_json(json.loads(text))
