"""Acceptance criteria, one test and one PASS/FAIL line each.

Run standalone (``python3 tests/test_acceptance.py``) or under pytest; the
lines are collected and echoed in the terminal summary either way.
"""

from __future__ import annotations

import math
import sys
import time
from fractions import Fraction

import numpy as np

from exobasis.admissibility import (
    AdmissibilityCertificate,
    candidate_vectors,
    check_certificate,
    search_certificate,
)
from exobasis.basis import (
    build_offsets,
    fiber_matrix,
    fiber_operator,
    free_system,
    riesz_bounds,
    unitary_factor,
)
from exobasis.completion import complete_to_tile
from exobasis.gallery import box_k_tile, example_2_10, example_2_11, example_kronecker, random_admissible_subtile
from exobasis.lattice import dual_pairing, integer_lattice
from exobasis.multitile import MultiTileSet, Piece, fiber_partition, tiling_level
from exobasis.oracle import (
    PolySpec,
    QuadratureConfig,
    default_window,
    frame_inequality_trial,
    gram_section,
    kronecker_search,
    poly_norm_direct,
    poly_norm_fiber,
)
from exobasis.region import UnitRegion

# tolerances and budgets, as stated by the criteria
EXACT_TOL = 1e-10
C1_BUDGET = 1.0
C2_BUDGET = 5.0
C3_BUDGET = 30.0
C4_BUDGET, C4_REL, C4_M, C4_TRIALS = 10.0, 1e-6, 256, 20
C5_TRIALS, C5_REL, C5_GRAM_TOL, C5_GRAM_M, C5_GRAM_MAX = 100, 1e-6, 1e-3, 512, 24
C6_BUDGET, C6_CASES = 30.0, 50
C7_A, C7_BETA, C7_EPS, C7_J, C7_MMAX = (math.sqrt(2), math.sqrt(3)), (0.25, 0.75), 0.1, 10, 10**6
C8_TRIPLES, C8_TOL = 1000, 1e-10

Z1 = integer_lattice(1)
RESULTS: list[str] = []


def report(num: int, ok: bool, detail: str) -> None:
    line = f"criterion {num}: {'PASS' if ok else 'FAIL'}  {detail}"
    RESULTS.append(line)
    print(line)
    assert ok, line


def dyadic_two_tile(translate, J=50):
    """``[0,1)`` plus ``I_j`` at ``translate(j)``, tail cell at ``translate(J + 1)``."""
    pieces = [Piece(UnitRegion.full(1), (0,))]
    for j in range(1, J + 2):
        hi = Fraction(2**j - 1, 2**j) if j <= J else Fraction(1)
        pieces.append(Piece(UnitRegion.interval(Fraction(2**j - 2, 2**j), hi), (translate(j),)))
    return MultiTileSet.build(Z1, pieces)


def criterion_1_systems():
    """(label, tile, certificate, k, expected A, expected B)."""
    c2, c3 = AdmissibilityCertificate(2, (1,)), AdmissibilityCertificate(3, (1,))
    out = [
        ("n=2 k=2 2.11 tile", dyadic_two_tile(lambda j: 2 * j + 1), c2, 2, 2.0, 2.0),
        ("n=2 k=2 box", box_k_tile(2), c2, 2, 2.0, 2.0),
        ("n=3 k=2 res{0,1}", dyadic_two_tile(lambda j: 3 * j + 1), c3, 2, 1.0, 3.0),
    ]
    for n in (2, 3, 4, 5):
        out.append((f"n=k={n} full", box_k_tile(n), AdmissibilityCertificate(n, (1,)), n, float(n), float(n)))
    return out


def test_criterion_1_exact_constants():
    systems = criterion_1_systems()
    t0 = time.perf_counter()
    errs = []
    for label, omega, cert, k, a, b in systems:
        part = fiber_partition(omega)
        rep = riesz_bounds(part, build_offsets(cert, k, omega.lattice))
        residues_ok = all(
            len({cert.residue(p) for p in c.points}) == k for c in part.classes
        )
        errs.append(max(abs(rep.A - a), abs(rep.B - b)) if residues_ok and rep.kind == "RieszBounds" else math.inf)
    dt = time.perf_counter() - t0
    worst = max(errs)
    report(1, worst <= EXACT_TOL and dt < C1_BUDGET, f"{len(systems)} systems, max |err| {worst:.2e}, {dt:.3f}s")


def test_criterion_2_example_2_11_pipeline():
    t0 = time.perf_counter()
    part = fiber_partition(example_2_11(50))
    level = tiling_level(part)
    cert = search_certificate(part, 10, 10)
    found = cert is not None and (cert.n, cert.v) == (2, (1,))
    delta = complete_to_tile(part, cert, 2) if found else None
    dpart = fiber_partition(delta) if found else None
    ok_tile = found and str(tiling_level(dpart)) == "ExactTile(2)"
    ok_cert = found and check_certificate(dpart, cert).valid
    rep = riesz_bounds(dpart, build_offsets(cert, 2, Z1)) if found else None
    ok_ab = rep is not None and abs(rep.A - 2) <= EXACT_TOL and abs(rep.B - 2) <= EXACT_TOL
    dt = time.perf_counter() - t0
    ok = str(level) == "SubTile(2)" and found and ok_tile and ok_cert and ok_ab and dt < C2_BUDGET
    detail = f"{level}, cert={cert and (cert.n, cert.v)}, A={rep and rep.A}, B={rep and rep.B}, {dt:.2f}s"
    report(2, ok, detail)


def test_criterion_3_example_2_10_negative():
    t0 = time.perf_counter()
    part = fiber_partition(example_2_10(50))
    checked = bad = 0
    for n in range(1, 51):
        for w in candidate_vectors(1, 50):
            if n > 1 and not any(w):
                continue  # not a certificate: v must be nonzero when n > 1
            result = check_certificate(part, AdmissibilityCertificate(n, w))
            checked += 1
            if result.valid:
                bad += 1
                continue
            v = result.violations[0]
            a, b = v.points
            if a == b or (dual_pairing(w, a) - dual_pairing(w, b)) % n:
                bad += 1
                continue
            cls = [c for c in part.classes if c.region == v.class_region]
            if len(cls) != 1 or not {a, b} <= set(cls[0].points):
                bad += 1
    none = search_certificate(part, 50, 50) is None
    dt = time.perf_counter() - t0
    report(3, bad == 0 and none and dt < C3_BUDGET, f"{checked} certificates Invalid with verified witness, search none={none}, {dt:.2f}s")


def _completed_2_11():
    return complete_to_tile(fiber_partition(example_2_11(50)), AdmissibilityCertificate(2, (1,)), 2)


def test_criterion_4_fiber_identity():
    t0 = time.perf_counter()
    omega = _completed_2_11()
    part = fiber_partition(omega)
    sys_ = build_offsets(AdmissibilityCertificate(2, (1,)), 2, Z1)
    q = QuadratureConfig(C4_M)
    rng = np.random.default_rng(4)
    worst = 0.0
    for _ in range(C4_TRIALS):
        p = PolySpec.random(2, 1, 3, rng)
        direct = poly_norm_direct(omega, sys_, p, q)
        fiber = poly_norm_fiber(part, sys_, p, q)
        worst = max(worst, abs(direct - fiber) / direct)
    dt = time.perf_counter() - t0
    report(4, worst <= C4_REL and dt < C4_BUDGET, f"max relative gap {worst:.2e} over {C4_TRIALS} trials, {dt:.2f}s")


def test_criterion_5_sandwich():
    lines = []
    ok = True
    for i, (label, omega, cert, k, _, _) in enumerate(criterion_1_systems()):
        part = fiber_partition(omega)
        sys_ = build_offsets(cert, k, omega.lattice)
        rep = riesz_bounds(part, sys_)
        s = frame_inequality_trial(part, sys_, rep, C5_TRIALS, seed=500 + i, rel_tol=C5_REL)
        in_rayleigh = rep.A - C5_REL * rep.B <= s.observed_min and s.observed_max <= rep.B + C5_REL * rep.B
        height = max(h for h in range(0, 20) if k * (2 * h + 1) <= C5_GRAM_MAX)
        window = default_window(k, 1, height)
        lo, hi = gram_section(omega, sys_, window, QuadratureConfig(C5_GRAM_M))
        in_gram = rep.A_L2 - C5_GRAM_TOL <= lo and hi <= rep.B_L2 + C5_GRAM_TOL
        ok &= in_rayleigh and in_gram
        lines.append(f"{label}: q in [{s.observed_min:.6g},{s.observed_max:.6g}] gram({len(window)}) in [{lo:.6g},{hi:.6g}]")
    report(5, ok, "; ".join(lines))


def test_criterion_6_completion():
    t0 = time.perf_counter()
    failures = []
    for case in range(C6_CASES):
        rng = np.random.default_rng(6000 + case)
        d, k = 1 + case % 2, 1 + (case // 2) % 4
        omega, cert = random_admissible_subtile(rng, d, k)
        delta = complete_to_tile(fiber_partition(omega), cert, k)
        dpart = fiber_partition(delta)
        checks = (
            delta.contains(omega),
            str(tiling_level(dpart)) == f"ExactTile({k})",
            check_certificate(dpart, cert).valid,
            delta.measure() == k * delta.lattice.det_abs,
            complete_to_tile(dpart, cert, k) == delta,
        )
        if not all(checks):
            failures.append((case, checks))
    dt = time.perf_counter() - t0
    report(6, not failures and dt < C6_BUDGET, f"{C6_CASES} cases, failures={failures}, {dt:.2f}s")


def test_criterion_7_kronecker():
    ms = [kronecker_search(C7_A, j, C7_BETA, C7_EPS, C7_MMAX) for j in range(1, C7_J + 2)]
    searches_ok = all(m is not None for m in ms)
    omega = example_kronecker(C7_J, C7_A, C7_BETA, C7_EPS, C7_MMAX, close_tail=True)
    part = fiber_partition(omega)
    rep = riesz_bounds(part, free_system(Z1, [[C7_A[0]], [C7_A[1]]]))
    r = np.array([[1, 1], np.exp(2j * np.pi * np.array(C7_BETA))])
    ev = np.linalg.eigvalsh(r @ r.conj().T)
    row_norm = max(np.linalg.norm(row) for row in r)
    bound = 3 * C7_EPS * row_norm
    dev = max(abs(rep.A - ev[0]), abs(rep.B - ev[-1]))
    ok = searches_ok and str(tiling_level(part)) == "ExactTile(2)" and dev <= bound
    report(7, ok, f"m_j={ms}, [A,B]=[{rep.A:.6g},{rep.B:.6g}] vs RR* [{ev[0]:.6g},{ev[-1]:.6g}], dev {dev:.3g} <= {bound:.3g}")


def test_criterion_8_invariance_and_converse():
    rng = np.random.default_rng(8)
    corpus = []
    for case in range(C6_CASES):
        r = np.random.default_rng(6000 + case)
        d, k = 1 + case % 2, 1 + (case // 2) % 4
        omega, cert = random_admissible_subtile(r, d, k)
        corpus.append((omega, cert, k))
        corpus.append((complete_to_tile(fiber_partition(omega), cert, k), cert, k))

    worst = 0.0
    triples = 0
    while triples < C8_TRIPLES:
        omega, cert, k = corpus[int(rng.integers(len(corpus)))]
        part = fiber_partition(omega)
        if not part.classes:
            continue
        cls = part.classes[int(rng.integers(len(part.classes)))]
        lo, hi = (np.array([float(x) for x in b]) for b in cls.region.boxes[int(rng.integers(len(cls.region.boxes)))])
        w = omega.lattice.basis_array() @ (lo + rng.random(omega.lattice.dim) * (hi - lo))
        sys_ = build_offsets(cert, k, omega.lattice)
        x = rng.standard_normal(k) + 1j * rng.standard_normal(k)
        lhs = np.linalg.norm(fiber_operator(sys_, cls.points, w) @ x)
        rhs = np.linalg.norm(fiber_matrix(cls.points, sys_) @ (unitary_factor(sys_, w) * x))
        worst = max(worst, abs(lhs - rhs))
        triples += 1

    mismatches = 0
    riesz = 0
    for omega, cert, k in corpus:
        part = fiber_partition(omega)
        if not part.classes:
            continue
        rep = riesz_bounds(part, build_offsets(cert, k, omega.lattice))
        if rep.kind == "RieszBounds":
            riesz += 1
            if str(tiling_level(part)) != f"ExactTile({k})":
                mismatches += 1
    ok = worst <= C8_TOL and mismatches == 0 and riesz > 0
    report(8, ok, f"{triples} triples, max gap {worst:.2e}; {riesz} RieszBounds reports, {mismatches} on non-tiles")


if __name__ == "__main__":
    failed = 0
    for name, fn in list(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)
