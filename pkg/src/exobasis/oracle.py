"""Independent numerical checks of the fiber machinery.

All integrals use one midpoint rule: the unit cube (lattice coordinates) is
cut into ``m**d`` congruent cells and a region is represented by the cell
midpoints it contains.  Membership is decided exactly on half-open boxes, so
a node is never counted twice.  The direct integral over the set and the
fiber integral over the fundamental domain then see the same node set, which
is what lets them be compared far below the quadrature error itself.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .basis import BoundsReport, ExponentialSystem, fiber_matrix, hermitian_eigen_range
from .errors import EmptyPoly, WindowEmpty
from .multitile import FiberPartition, MultiTileSet
from .region import UnitRegion

DualIndex = tuple[int, ...]

_HALF = Fraction(1, 2)


@dataclass(frozen=True)
class PolySpec:
    """Coefficients ``c[j, h]`` of ``P = sum c[j, h] e(a_j + h)``; ``j`` is 0-based."""

    coeffs: dict[tuple[int, DualIndex], complex]

    def nonzero(self) -> dict[tuple[int, DualIndex], complex]:
        return {key: c for key, c in self.coeffs.items() if c != 0}

    def coeff_norm2(self) -> float:
        return math.fsum(abs(c) ** 2 for c in self.coeffs.values())

    @classmethod
    def random(cls, k: int, dim: int, height: int, rng: np.random.Generator) -> PolySpec:
        """Standard complex Gaussian coefficients on ``j < k``, ``|h|_inf <= height``."""
        keys = default_window(k, dim, height)
        z = (rng.standard_normal(len(keys)) + 1j * rng.standard_normal(len(keys))) / math.sqrt(2)
        return cls(dict(zip(keys, (complex(x) for x in z))))


@dataclass(frozen=True)
class QuadratureConfig:
    m: int = 256
    rule: str = "midpoint"

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("points_per_unit_axis must be >= 1")
        if self.rule != "midpoint":
            raise ValueError(f"unsupported rule {self.rule!r}")


def region_nodes(region: UnitRegion, m: int) -> np.ndarray:
    """Midpoints ``(i + 1/2) / m`` that lie in ``region``, as an ``(N, d)`` array."""
    blocks = []
    for lo, hi in region.boxes:
        # node i lies in [lo, hi) iff lo*m - 1/2 <= i < hi*m - 1/2
        ranges = [
            np.arange(math.ceil(a * m - _HALF), math.ceil(b * m - _HALF))
            for a, b in zip(lo, hi)
        ]
        if any(r.size == 0 for r in ranges):
            continue
        grid = np.meshgrid(*ranges, indexing="ij")
        idx = np.stack([g.ravel() for g in grid], axis=1)
        blocks.append((idx + 0.5) / m)
    if not blocks:
        return np.zeros((0, region.dim))
    return np.concatenate(blocks)


def _frequencies(sys: ExponentialSystem, keys: Sequence[tuple[int, DualIndex]]) -> np.ndarray:
    a = sys.offset_vectors()
    h_basis = sys.lattice.dual_array()
    return np.array([a[j] + h_basis @ np.asarray(h, dtype=float) for j, h in keys]).reshape(
        len(keys), sys.lattice.dim
    )


def poly_norm_direct(
    omega: MultiTileSet, sys: ExponentialSystem, p: PolySpec, q: QuadratureConfig = QuadratureConfig()
) -> float:
    """Midpoint value of ``int_Omega |P|^2``, evaluating ``P`` at ambient points."""
    terms = p.nonzero()
    if not terms:
        raise EmptyPoly("polynomial has no nonzero coefficients")
    keys = list(terms)
    freqs = _frequencies(sys, keys)
    coeffs = np.array([terms[key] for key in keys], dtype=np.complex128).reshape(-1, 1)
    m_mat = omega.lattice.basis_array()
    partial = []
    for piece in omega.pieces:
        u = region_nodes(piece.region, q.m)
        if u.shape[0] == 0:
            continue
        pts = (u + np.asarray(piece.translate, dtype=float)) @ m_mat.T
        vals = kernels.exp_sums(pts, freqs, coeffs)[:, 0]
        partial.append(float(np.sum(vals.real**2 + vals.imag**2)))
    cell = float(omega.lattice.det_abs) / q.m**omega.lattice.dim
    return math.fsum(partial) * cell


def _fiber_parts(sys: ExponentialSystem, p: PolySpec):
    terms = p.nonzero()
    if not terms:
        raise EmptyPoly("polynomial has no nonzero coefficients")
    hs = sorted({h for _, h in terms})
    row = {h: i for i, h in enumerate(hs)}
    c = np.zeros((len(hs), sys.k), dtype=np.complex128)
    for (j, h), val in terms.items():
        c[row[h], j] += val
    h_freqs = np.array([sys.lattice.dual_array() @ np.asarray(h, dtype=float) for h in hs]).reshape(
        len(hs), sys.lattice.dim
    )
    return h_freqs, c


def fiber_integrand(
    sys: ExponentialSystem, points, omega_pts: np.ndarray, h_freqs: np.ndarray, c: np.ndarray
) -> np.ndarray:
    """``||E_R U_omega m(omega)||^2`` at each ambient point ``omega`` of one class."""
    m_vals = kernels.exp_sums(omega_pts, h_freqs, c)
    x = m_vals * np.exp(2j * np.pi * (omega_pts @ sys.offset_vectors().T))
    tm = x @ fiber_matrix(points, sys).T
    return np.sum(tm.real**2 + tm.imag**2, axis=1)


def poly_norm_fiber(
    part: FiberPartition, sys: ExponentialSystem, p: PolySpec, q: QuadratureConfig = QuadratureConfig()
) -> float:
    """Midpoint value of ``int_D ||T_omega m(omega)||^2`` summed over fiber classes."""
    h_freqs, c = _fiber_parts(sys, p)
    m_mat = part.lattice.basis_array()
    partial = []
    for cls in part.classes:
        u = region_nodes(cls.region, q.m)
        if u.shape[0] == 0:
            continue
        partial.append(float(np.sum(fiber_integrand(sys, cls.points, u @ m_mat.T, h_freqs, c))))
    cell = float(part.lattice.det_abs) / q.m**part.lattice.dim
    return math.fsum(partial) * cell


@dataclass(frozen=True)
class TrialSummary:
    quotients: tuple[float, ...]
    observed_min: float
    observed_max: float
    lower: float
    upper: float
    lower_enforced: bool

    @property
    def ok(self) -> bool:
        above = self.observed_min >= self.lower or not self.lower_enforced
        return above and self.observed_max <= self.upper


def frame_inequality_trial(
    part: FiberPartition,
    sys: ExponentialSystem,
    report: BoundsReport,
    trials: int,
    seed: int,
    height: int = 3,
    q: QuadratureConfig = QuadratureConfig(),
    rel_tol: float = 1e-6,
) -> TrialSummary:
    """Rayleigh quotients ``||P||^2 / (|D| sum |c|^2)`` of seeded random polynomials.

    The lower bound only constrains synthesis norms for Riesz systems, so it
    is enforced only when ``report.kind == "RieszBounds"``.
    """
    rng = np.random.default_rng(seed)
    det = float(part.lattice.det_abs)
    qs = []
    for _ in range(trials):
        p = PolySpec.random(sys.k, part.lattice.dim, height, rng)
        qs.append(poly_norm_fiber(part, sys, p, q) / (det * p.coeff_norm2()))
    tol = rel_tol * report.B
    return TrialSummary(
        tuple(qs),
        min(qs, default=float("nan")),
        max(qs, default=float("nan")),
        report.A - tol,
        report.B + tol,
        report.kind == "RieszBounds",
    )


def write_quotients_csv(path_or_file, summary: TrialSummary) -> None:
    own = isinstance(path_or_file, str)
    fh = open(path_or_file, "w", newline="") if own else path_or_file
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["trial", "quotient"])
        for i, x in enumerate(summary.quotients):
            w.writerow([i, f"{x:.12g}"])
    finally:
        if own:
            fh.close()


def gram_matrix(
    omega: MultiTileSet,
    sys: ExponentialSystem,
    window: Iterable[tuple[int, DualIndex]],
    q: QuadratureConfig = QuadratureConfig(),
) -> np.ndarray:
    """``G[p, q] = int_Omega e_p conj(e_q)`` over the window's exponentials."""
    keys = list(window)
    if not keys:
        raise WindowEmpty("Gram window is empty")
    freqs = _frequencies(sys, keys)
    m_mat = omega.lattice.basis_array()
    g = np.zeros((len(keys), len(keys)), dtype=np.complex128)
    for piece in omega.pieces:
        u = region_nodes(piece.region, q.m)
        if u.shape[0] == 0:
            continue
        pts = (u + np.asarray(piece.translate, dtype=float)) @ m_mat.T
        phi = np.exp(2j * np.pi * (pts @ freqs.T))
        g += phi.T @ phi.conj()
    g *= float(omega.lattice.det_abs) / q.m**omega.lattice.dim
    return 0.5 * (g + g.conj().T)


def gram_section(
    omega: MultiTileSet,
    sys: ExponentialSystem,
    window: Iterable[tuple[int, DualIndex]],
    q: QuadratureConfig = QuadratureConfig(),
) -> tuple[float, float]:
    return hermitian_eigen_range(gram_matrix(omega, sys, window, q))


def default_window(k: int, dim: int, height: int) -> list[tuple[int, DualIndex]]:
    hs = [tuple(x - height for x in h) for h in np.ndindex(*(2 * height + 1,) * dim)]
    return [(j, tuple(int(x) for x in h)) for j in range(k) for h in hs]


def kronecker_search(
    a: Sequence[float], j: int, beta: Sequence[float], eps: float, m_max: int
) -> int | None:
    """Smallest ``|m| <= m_max`` (positive first) with
    ``||(e(a_1 j m), e(a_2 j m)) - (e(beta_1), e(beta_2))||_2 < eps``."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    x1 = math.fmod(a[0] * j, 1.0)
    x2 = math.fmod(a[1] * j, 1.0)
    found, m = kernels.kronecker_scan(x1, x2, float(beta[0]), float(beta[1]), float(eps), int(m_max))
    return int(m) if found else None


def kronecker_distance(a: Sequence[float], j: int, m: int, beta: Sequence[float]) -> float:
    """Distance in the displayed inequality, evaluated with complex exponentials."""
    z = np.exp(2j * np.pi * np.array([a[0] * j * m, a[1] * j * m]))
    t = np.exp(2j * np.pi * np.asarray(beta, dtype=float))
    return float(np.linalg.norm(z - t))
