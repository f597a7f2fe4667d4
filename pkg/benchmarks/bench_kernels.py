"""Time each kernel under numba and under the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--json]

The first numba call of each kernel is timed separately as compile/load
time; the reported figure is the best of ``--repeat`` warm calls.
"""

from __future__ import annotations

import argparse
import json
import math
import time

import numpy as np

from exobasis import kernels
from exobasis.admissibility import _flatten, candidate_vectors
from exobasis.gallery import example_2_10
from exobasis.multitile import fiber_partition


def cases():
    part = fiber_partition(example_2_10(50))
    pts, ptr = _flatten(part)
    pts = pts.astype(np.int64)
    cands = np.array([w for w in candidate_vectors(1, 50) if any(w)], dtype=np.int64)
    yield "first_admissible (2.10 at J=50, n=37)", "first_admissible", (pts, ptr, cands, 37)

    x1, x2 = math.fmod(math.sqrt(2) * 7, 1.0), math.fmod(math.sqrt(3) * 7, 1.0)
    yield "kronecker_scan (eps=0.02, m_max=1e6)", "kronecker_scan", (x1, x2, 0.25, 0.75, 0.02, 10**6)

    rng = np.random.default_rng(0)
    x = rng.standard_normal((48, 48)) + 1j * rng.standard_normal((48, 48))
    yield "jacobi_eigvalsh (48x48)", "jacobi_eigvalsh", (x @ x.conj().T, 1e-15, 100)

    nodes = rng.random((4096, 1))
    freqs = rng.standard_normal((14, 1)) * 5
    coeffs = rng.standard_normal((14, 2)) + 1j * rng.standard_normal((14, 2))
    yield "exp_sums (4096 nodes, 14 freqs)", "exp_sums", (nodes, freqs, coeffs)


def best_of(fn, args, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        times.append(time.perf_counter() - t0)
    return min(times)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args()

    rows = []
    for label, name, fargs in cases():
        nb = kernels.IMPLEMENTATIONS["numba"][name]
        npy = kernels.IMPLEMENTATIONS["numpy"][name]
        t0 = time.perf_counter()
        nb(*fargs)
        first = time.perf_counter() - t0
        t_nb = best_of(nb, fargs, args.repeat)
        t_np = best_of(npy, fargs, args.repeat)
        rows.append({"kernel": label, "numba_first_s": first, "numba_s": t_nb, "numpy_s": t_np,
                     "speedup": t_np / t_nb if t_nb > 0 else float("inf")})

    if args.json:
        print(json.dumps({"numba_available": kernels.HAVE_NUMBA, "rows": rows}, indent=2))
        return
    print(f"{'kernel':42s} {'numba 1st':>10s} {'numba':>10s} {'numpy':>10s} {'speedup':>8s}")
    for r in rows:
        print(f"{r['kernel']:42s} {r['numba_first_s']:10.4f} {r['numba_s']:10.5f} {r['numpy_s']:10.5f} {r['speedup']:8.1f}x")


if __name__ == "__main__":
    main()
