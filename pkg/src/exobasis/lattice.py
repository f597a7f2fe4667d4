"""Full lattices with exact rational bases.

A lattice is stored as its basis matrix ``M`` (rows are coordinates, columns
are generators), so lattice points are ``M @ z`` for integer ``z`` and the
dual lattice is ``inv(M.T) @ w`` for integer ``w``.  Points of either lattice
are carried as integer coordinate tuples; the pairing between them reduces to
an integer dot product and never touches floating point.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import DimensionMismatch, SingularMatrix

LatticePoint = tuple[int, ...]
DualVector = tuple[int, ...]
RationalMatrix = tuple[tuple[Fraction, ...], ...]


def parse_rational(x) -> Fraction:
    """Accept ints, Fractions and ``"p/q"`` strings; reject floats."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


def format_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _gauss_jordan(a: list[list[Fraction]], b: list[list[Fraction]] | None):
    """Row-reduce ``a`` in place, applying the same operations to ``b``.

    Returns the determinant of the original ``a``.
    """
    n = len(a)
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            if b is not None:
                b[col], b[pivot] = b[pivot], b[col]
            det = -det
        p = a[col][col]
        det *= p
        inv_p = 1 / p
        a[col] = [x * inv_p for x in a[col]]
        if b is not None:
            b[col] = [x * inv_p for x in b[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
                if b is not None:
                    b[r] = [x - f * y for x, y in zip(b[r], b[col])]
    return det


def rational_det(m: Sequence[Sequence[Fraction]]) -> Fraction:
    return _gauss_jordan([list(row) for row in m], None)


def rational_inverse(m: Sequence[Sequence[Fraction]]) -> RationalMatrix:
    n = len(m)
    ident = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    det = _gauss_jordan([list(row) for row in m], ident)
    if det == 0:
        raise SingularMatrix("matrix is singular")
    return tuple(tuple(row) for row in ident)


@dataclass(frozen=True)
class Lattice:
    """Lattice ``M Z^d`` with fundamental domain ``M [0,1)^d``."""

    dim: int
    basis: RationalMatrix
    det_abs: Fraction
    _dual: RationalMatrix = field(repr=False, compare=False)

    @property
    def dual_basis(self) -> RationalMatrix:
        """Exact ``inv(M.T)``; its columns generate the dual lattice."""
        return self._dual

    def basis_array(self) -> np.ndarray:
        return np.array([[float(x) for x in row] for row in self.basis])

    def dual_array(self) -> np.ndarray:
        return np.array([[float(x) for x in row] for row in self._dual])

    def check_point(self, z: Sequence[int]) -> LatticePoint:
        if len(z) != self.dim:
            raise DimensionMismatch(f"expected {self.dim} coordinates, got {len(z)}")
        return tuple(int(c) for c in z)

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "basis": [[format_rational(x) for x in row] for row in self.basis],
        }

    @classmethod
    def from_json(cls, doc: dict) -> Lattice:
        lat = make_lattice(doc["basis"])
        if "dim" in doc and int(doc["dim"]) != lat.dim:
            raise DimensionMismatch("'dim' disagrees with basis shape")
        return lat


def make_lattice(basis) -> Lattice:
    """Build a lattice from a square matrix of exact rationals.

    >>> make_lattice([["2", 0], [0, "1/3"]]).det_abs
    Fraction(2, 3)
    """
    rows = [list(r) for r in basis]
    d = len(rows)
    if d == 0 or any(len(r) != d for r in rows):
        raise DimensionMismatch("basis must be a non-empty square matrix")
    m = tuple(tuple(parse_rational(x) for x in r) for r in rows)
    det = rational_det(m)
    if det == 0:
        raise SingularMatrix("lattice basis has zero determinant")
    transpose = tuple(tuple(m[j][i] for j in range(d)) for i in range(d))
    return Lattice(dim=d, basis=m, det_abs=abs(det), _dual=rational_inverse(transpose))


def integer_lattice(d: int) -> Lattice:
    return make_lattice([[int(i == j) for j in range(d)] for i in range(d)])


def dual_pairing(v: Sequence[int], lam: Sequence[int]) -> int:
    """``<inv(M.T) w, M z> = w . z``, exactly."""
    if len(v) != len(lam):
        raise DimensionMismatch(f"dual vector has dim {len(v)}, lattice point has dim {len(lam)}")
    return sum(int(a) * int(b) for a, b in zip(v, lam))


def embed_point(lat: Lattice, u: Sequence[float], z: Sequence[int]) -> np.ndarray:
    """Ambient coordinates ``M (u + z)`` of a fundamental-domain point shifted by ``z``."""
    if len(u) != lat.dim or len(z) != lat.dim:
        raise DimensionMismatch("point dimension differs from lattice dimension")
    return lat.basis_array() @ (np.asarray(u, dtype=float) + np.asarray(z, dtype=float))


def dual_vector_array(lat: Lattice, w: Sequence[int]) -> np.ndarray:
    """Floating-point ambient coordinates of the dual vector with coordinates ``w``."""
    return lat.dual_array() @ np.asarray(w, dtype=float)
