"""Compare the numba kernels against the pure-numpy fallbacks.

Run as a script; it imports both implementations directly (no env flag
needed) and times gate application, ladder-table construction, and the
Fock permutation lift on acceptance-sized registers.

    python benchmarks/bench_kernels.py [--repeats 5]
"""

import argparse
import time

import numpy as np

from fermiqca import _kernels as k


def _time(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeats", type=int, default=5)
    ap.add_argument("--qubits", type=int, default=12)
    args = ap.parse_args()

    n = args.qubits
    rng = np.random.default_rng(0)
    state = rng.standard_normal(1 << n) + 1j * rng.standard_normal(1 << n)
    mat = rng.standard_normal((1 << n, 1 << n)) + 0j
    gate2 = np.linalg.qr(rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4)))[0]
    gate4 = np.linalg.qr(rng.standard_normal((16, 16)) + 1j * rng.standard_normal((16, 16)))[0]
    q2 = np.array([2, 7], dtype=np.int64)
    q4 = np.array([1, 4, 8, 11], dtype=np.int64)

    rows = []
    if k._NUMBA:
        base2 = k._base_indices(n, q2)
        offs2 = k._gate_offsets(q2)
        base4 = k._base_indices(n, q4)
        offs4 = k._gate_offsets(q4)
        k._apply_gate_vec_nb(state, gate2, base2, offs2)  # warm the JIT
        k._apply_gate_mat_nb(mat, gate2, base2, offs2)
        k._ladder_nb(n, n // 2, True)
        k._perm_fock_nb(np.roll(np.arange(n), 1), n)
        rows.append(("2q gate on 2^%d vector" % n,
                     _time(lambda: k._apply_gate_vec_nb(state, gate2, base2, offs2), args.repeats),
                     _time(lambda: k._apply_gate_np(state, gate2, q2, n), args.repeats)))
        rows.append(("4q gate on 2^%d vector" % n,
                     _time(lambda: k._apply_gate_vec_nb(state, gate4, base4, offs4), args.repeats),
                     _time(lambda: k._apply_gate_np(state, gate4, q4, n), args.repeats)))
        rows.append(("2q gate on 2^%d matrix" % n,
                     _time(lambda: k._apply_gate_mat_nb(mat, gate2, base2, offs2), args.repeats),
                     _time(lambda: k._apply_gate_np(mat, gate2, q2, n), args.repeats)))
        rows.append(("4q gate on 2^%d matrix" % n,
                     _time(lambda: k._apply_gate_mat_nb(mat, gate4, base4, offs4), args.repeats),
                     _time(lambda: k._apply_gate_np(mat, gate4, q4, n), args.repeats)))
        rows.append(("ladder table, %d modes" % n,
                     _time(lambda: k._ladder_nb(n, n // 2, True), args.repeats),
                     _time(lambda: k._ladder_np(n, n // 2, True), args.repeats)))
        perm = np.roll(np.arange(n), 1)
        rows.append(("fock permutation, %d modes" % n,
                     _time(lambda: k._perm_fock_nb(perm, n), args.repeats),
                     _time(lambda: k._perm_fock_np(perm, n), args.repeats)))
    else:
        print("numba unavailable (or FERMIQCA_PURE_NUMPY=1): nothing to compare")
        return

    print(f"{'kernel':36s} {'numba':>10s} {'numpy':>10s} {'speedup':>8s}")
    for name, tn, tp in rows:
        print(f"{name:36s} {tn*1e3:9.2f}ms {tp*1e3:9.2f}ms {tp/tn:7.2f}x")


if __name__ == "__main__":
    main()
