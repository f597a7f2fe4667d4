"""Structured exponential systems and their exact fiber bounds.

For a system ``E(H; a_1, ..., a_k)`` and a fiber class with lattice points
``R = {lambda_1, ..., lambda_l}``, the fiber matrix has entries
``exp(2 pi i a_j . lambda_l)``.  The squared-norm bounds of the system on the
class are the extremal eigenvalues of ``E_R E_R^*``; since the remaining
``omega``-dependence is a diagonal unitary factor, these bounds are constant
on each class and the global constants are a min/max over finitely many
classes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from . import kernels
from .admissibility import AdmissibilityCertificate
from .errors import ClassTooLarge, DimensionMismatch, DuplicateResidue, KExceedsN, NotHermitian
from .lattice import Lattice, LatticePoint, dual_pairing, dual_vector_array
from .multitile import FiberClass, FiberPartition

DEGENERACY_TOL = 1e-9


@dataclass(frozen=True)
class StructuredOffset:
    """``a = (s / n) v`` with ``v`` a dual-lattice vector in integer coordinates."""

    s: int
    n: int
    v: tuple[int, ...]


@dataclass(frozen=True)
class FreeOffset:
    vector: tuple[float, ...]


Offset = Union[StructuredOffset, FreeOffset]


@dataclass(frozen=True)
class ExponentialSystem:
    lattice: Lattice
    offsets: tuple[Offset, ...]
    warning: str | None = None

    @property
    def k(self) -> int:
        return len(self.offsets)

    def offset_vectors(self) -> np.ndarray:
        """Ambient offsets ``a_j`` as a ``(k, d)`` float array."""
        out = np.empty((self.k, self.lattice.dim))
        for j, off in enumerate(self.offsets):
            if isinstance(off, StructuredOffset):
                out[j] = off.s / off.n * dual_vector_array(self.lattice, off.v)
            else:
                out[j] = off.vector
        return out

    def to_json(self) -> dict:
        offs = []
        for off in self.offsets:
            if isinstance(off, StructuredOffset):
                offs.append({"s": off.s, "n": off.n, "v": list(off.v)})
            else:
                offs.append({"free": list(off.vector)})
        doc = {"offsets": offs}
        if self.warning:
            doc["warning"] = self.warning
        return doc


def free_system(lattice: Lattice, vectors: Sequence[Sequence[float]]) -> ExponentialSystem:
    offs = []
    for vec in vectors:
        if len(vec) != lattice.dim:
            raise DimensionMismatch(f"offset has dim {len(vec)}, lattice has dim {lattice.dim}")
        offs.append(FreeOffset(tuple(float(x) for x in vec)))
    if not offs:
        raise ValueError("a system needs at least one offset")
    return ExponentialSystem(lattice, tuple(offs))


def build_offsets(cert: AdmissibilityCertificate, k: int, lattice: Lattice) -> ExponentialSystem:
    """Offsets ``a_j = (j - 1) v / n`` for ``j = 1..k``."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if k > cert.n:
        raise KExceedsN(f"k={k} offsets need n >= k, got n={cert.n}")
    if len(cert.v) != lattice.dim:
        raise DimensionMismatch("certificate and lattice dimensions differ")
    return ExponentialSystem(
        lattice, tuple(StructuredOffset(j, cert.n, cert.v) for j in range(k))
    )


def _is_prime(n: int) -> bool:
    return n >= 2 and all(n % p for p in range(2, math.isqrt(n) + 1))


def build_offsets_indexed(
    cert: AdmissibilityCertificate, s: Sequence[int], lattice: Lattice
) -> ExponentialSystem:
    """Offsets ``a_j = s_j v / n`` for arbitrary residues ``s_j``.

    Only prime ``n`` guarantees invertible fiber matrices for every choice of
    distinct ``s_j``; for composite ``n`` the system is built with a warning
    and the bounds report decides.
    """
    if not s:
        raise ValueError("need at least one index")
    if len({x % cert.n for x in s}) != len(s):
        raise DuplicateResidue(f"indices {list(s)} are not distinct mod {cert.n}")
    if len(cert.v) != lattice.dim:
        raise DimensionMismatch("certificate and lattice dimensions differ")
    offs = tuple(StructuredOffset(int(x), cert.n, cert.v) for x in s)
    warning = None
    if cert.n > 1 and not _is_prime(cert.n):
        warning = f"n={cert.n} is composite; invertibility is checked numerically"
    return ExponentialSystem(lattice, offs, warning)


def root_of_unity(r: int, n: int) -> complex:
    """``exp(2 pi i r / n)``, exact at multiples of a quarter turn."""
    r %= n
    if (4 * r) % n == 0:
        return (1 + 0j, 1j, -1 + 0j, -1j)[4 * r // n]
    ang = 2.0 * math.pi * r / n
    return complex(math.cos(ang), math.sin(ang))


def fiber_matrix(points: Sequence[LatticePoint], sys: ExponentialSystem) -> np.ndarray:
    """``(l, k)`` matrix ``exp(2 pi i a_j . lambda)``; rows in the given point order."""
    if not points:
        raise ValueError("fiber class has no points")
    lat = sys.lattice
    for lam in points:
        if len(lam) != lat.dim:
            raise DimensionMismatch("lattice point dimension differs from the system's lattice")
    out = np.empty((len(points), sys.k), dtype=np.complex128)
    m = lat.basis_array()
    for j, off in enumerate(sys.offsets):
        if isinstance(off, StructuredOffset):
            for i, lam in enumerate(points):
                out[i, j] = root_of_unity(off.s * dual_pairing(off.v, lam), off.n)
        else:
            a = np.asarray(off.vector)
            for i, lam in enumerate(points):
                out[i, j] = np.exp(2j * np.pi * float(a @ (m @ np.asarray(lam, dtype=float))))
    return out


def hermitian_eigen_range(g: np.ndarray) -> tuple[float, float]:
    """Smallest and largest eigenvalue of a Hermitian matrix.

    Closed form up to 2x2, cyclic Jacobi beyond.
    """
    g = np.asarray(g, dtype=np.complex128)
    if g.ndim != 2 or g.shape[0] != g.shape[1] or g.shape[0] == 0:
        raise NotHermitian("expected a non-empty square matrix")
    scale = max(1.0, float(np.max(np.abs(g))))
    if np.max(np.abs(g - g.conj().T)) > 1e-12 * scale:
        raise NotHermitian("matrix is not Hermitian")
    n = g.shape[0]
    if n == 1:
        x = float(g[0, 0].real)
        return x, x
    if n == 2:
        a, b = g[0, 0].real, g[1, 1].real
        mid = 0.5 * (a + b)
        rad = math.hypot(0.5 * (a - b), abs(g[0, 1]))
        return float(mid - rad), float(mid + rad)
    ev = kernels.jacobi_eigvalsh(g, 1e-15, 100)
    return float(ev[0]), float(ev[-1])


@dataclass(frozen=True)
class ClassBounds:
    fiber: FiberClass
    residues: tuple[int, ...] | None
    eig_min: float
    eig_max: float


@dataclass(frozen=True)
class BoundsReport:
    per_class: tuple[ClassBounds, ...]
    A: float
    B: float
    det_abs: float
    kind: str  # "RieszBounds" | "FrameBounds" | "Degenerate"
    k: int = field(default=0)

    @property
    def A_L2(self) -> float:
        return self.det_abs * self.A

    @property
    def B_L2(self) -> float:
        return self.det_abs * self.B


def _structured_residues(points, sys: ExponentialSystem) -> tuple[int, ...] | None:
    offs = sys.offsets
    if not all(isinstance(o, StructuredOffset) for o in offs):
        return None
    n, v = offs[0].n, offs[0].v
    if any(o.n != n or o.v != v for o in offs):
        return None
    return tuple(dual_pairing(v, lam) % n for lam in points)


def riesz_bounds(part: FiberPartition, sys: ExponentialSystem) -> BoundsReport:
    if part.lattice.dim != sys.lattice.dim:
        raise DimensionMismatch("partition and system live on different lattices")
    k = sys.k
    cache: dict[tuple[int, ...], tuple[float, float]] = {}
    rows = []
    for cls in part.classes:
        if len(cls.points) > k:
            raise ClassTooLarge(
                f"class with {len(cls.points)} points exceeds the {k} available offsets"
            )
        residues = _structured_residues(cls.points, sys)
        key = tuple(sorted(residues)) if residues is not None else None
        if key is not None and key in cache:
            lo, hi = cache[key]
        else:
            e = fiber_matrix(cls.points, sys)
            lo, hi = hermitian_eigen_range(e @ e.conj().T)
            if key is not None:
                cache[key] = (lo, hi)
        rows.append(ClassBounds(cls, residues, lo, hi))

    if not rows:
        return BoundsReport((), 0.0, 0.0, float(part.lattice.det_abs), "Degenerate", k)
    a = min(r.eig_min for r in rows)
    b = max(r.eig_max for r in rows)
    if a < DEGENERACY_TOL:
        kind = "Degenerate"
    elif all(len(r.fiber.points) == k for r in rows) and part.uncovered.is_empty():
        kind = "RieszBounds"
    else:
        kind = "FrameBounds"
    return BoundsReport(tuple(rows), a, b, float(part.lattice.det_abs), kind, k)


def fiber_operator(sys: ExponentialSystem, points: Sequence[LatticePoint], omega: np.ndarray) -> np.ndarray:
    """``T_omega`` evaluated directly: ``exp(2 pi i a_j . (omega + lambda_l))`` in floating point."""
    a = sys.offset_vectors()
    m = sys.lattice.basis_array()
    lam = np.array([m @ np.asarray(p, dtype=float) for p in points])
    return np.exp(2j * np.pi * ((omega[None, :] + lam) @ a.T))


def unitary_factor(sys: ExponentialSystem, omega: np.ndarray) -> np.ndarray:
    """Diagonal of ``U_omega``: ``exp(2 pi i a_j . omega)``."""
    return np.exp(2j * np.pi * (sys.offset_vectors() @ omega))
