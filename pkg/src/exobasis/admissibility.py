"""Admissibility certificates ``(n, v)`` and the searches around them.

A certificate is valid for a partition when, inside every fiber class, the
integers ``<v, lambda>`` are pairwise distinct modulo ``n``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Sequence

import numpy as np

from . import kernels
from .errors import DimensionMismatch, GeneratorInconsistent
from .lattice import DualVector, LatticePoint, dual_pairing
from .multitile import FiberPartition, MultiTileSet, fiber_partition
from .region import UnitRegion

_INT64_SAFE = 2**62


@dataclass(frozen=True)
class AdmissibilityCertificate:
    n: int
    v: DualVector

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("certificate modulus must be >= 1")
        object.__setattr__(self, "v", tuple(int(x) for x in self.v))
        if self.n > 1 and not any(self.v):
            raise ValueError("certificate vector must be nonzero when n > 1")

    def residue(self, lam: Sequence[int]) -> int:
        return dual_pairing(self.v, lam) % self.n

    def to_json(self) -> dict:
        return {"n": self.n, "v": list(self.v)}


@dataclass(frozen=True)
class Violation:
    class_region: UnitRegion
    points: tuple[LatticePoint, LatticePoint]
    residue: int

    def to_json(self) -> dict:
        return {
            "region": self.class_region.to_json(),
            "points": [list(p) for p in self.points],
            "residue": self.residue,
        }


@dataclass(frozen=True)
class CertificateCheck:
    violations: tuple[Violation, ...] = field(default=())

    @property
    def valid(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.valid


def _check_dims(part: FiberPartition, v: Sequence[int]) -> None:
    if len(v) != part.lattice.dim:
        raise DimensionMismatch(f"certificate vector has dim {len(v)}, lattice has dim {part.lattice.dim}")


def check_certificate(part: FiberPartition, cert: AdmissibilityCertificate) -> CertificateCheck:
    """Report, per class and residue, the first pair of points that collide."""
    _check_dims(part, cert.v)
    found = []
    for cls in part.classes:
        first: dict[int, LatticePoint] = {}
        for lam in cls.points:
            r = cert.residue(lam)
            if r in first:
                found.append(Violation(cls.region, (first[r], lam), r))
            else:
                first[r] = lam
    return CertificateCheck(tuple(found))


def candidate_vectors(dim: int, height: int) -> list[DualVector]:
    """Integer vectors with max-norm <= height, in scan order.

    Shells of increasing max-norm; inside a shell, coordinates compare by
    ``(|x|, x < 0)`` lexicographically, so ``1`` precedes ``-1``.
    """
    vecs = product(range(-height, height + 1), repeat=dim)
    return sorted(
        vecs,
        key=lambda w: (max((abs(x) for x in w), default=0), tuple((abs(x), x < 0) for x in w)),
    )


def _flatten(part: FiberPartition) -> tuple[np.ndarray, np.ndarray]:
    pts = [lam for cls in part.classes for lam in cls.points]
    ptr = np.zeros(len(part.classes) + 1, dtype=np.int64)
    ptr[1:] = np.cumsum([len(c.points) for c in part.classes])
    arr = np.array(pts, dtype=object).reshape(len(pts), part.lattice.dim) if pts else np.zeros((0, part.lattice.dim))
    return arr, ptr


def search_certificate(
    part: FiberPartition, n_max: int, v_height: int
) -> AdmissibilityCertificate | None:
    """First valid certificate with ``n <= n_max`` and ``|w|_inf <= v_height``.

    ``None`` only means nothing was found within those bounds.
    """
    if n_max < 1 or v_height < 1:
        raise ValueError("n_max and v_height must be >= 1")
    d = part.lattice.dim
    cands = candidate_vectors(d, v_height)
    pts, ptr = _flatten(part)
    max_pt = max((abs(int(x)) for x in pts.ravel()), default=0)
    use_kernel = max_pt * v_height * d < _INT64_SAFE
    if use_kernel:
        pts64 = pts.astype(np.int64)
    for n in range(1, n_max + 1):
        batch = cands if n == 1 else [w for w in cands if any(w)]
        if use_kernel:
            idx = kernels.first_admissible(pts64, ptr, np.array(batch, dtype=np.int64).reshape(len(batch), d), n)
            if idx >= 0:
                return AdmissibilityCertificate(n, batch[idx])
        else:
            for w in batch:
                cert = AdmissibilityCertificate(n, w)
                if check_certificate(part, cert).valid:
                    return cert
    return None


@dataclass(frozen=True)
class FamilyResult:
    passed: bool
    level: int
    violation: Violation | None = None

    def __str__(self) -> str:
        if self.passed:
            return f"PassThrough({self.level})"
        return f"FailAt({self.level})"


def certify_family(
    gen: Callable[[int], MultiTileSet], cert: AdmissibilityCertificate, j_max: int
) -> FamilyResult:
    """Check ``cert`` on truncations ``gen(1), ..., gen(j_max)`` in order."""
    prev = None
    for j in range(1, j_max + 1):
        omega = gen(j)
        if prev is not None and not omega.contains(prev):
            raise GeneratorInconsistent(f"level {j} does not contain level {j - 1}")
        result = check_certificate(fiber_partition(omega), cert)
        if not result.valid:
            return FamilyResult(False, j, result.violations[0])
        prev = omega
    return FamilyResult(True, j_max)
