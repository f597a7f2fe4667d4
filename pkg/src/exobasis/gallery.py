"""Named example sets and synthetic tiles.

The two-tiles of the line below share one layout: the unit interval, plus
the dyadic pieces ``I_j = [1 - 2^(1-j), 1 - 2^(-j))`` moved to translate
``t(j)``.  A truncation at ``J`` leaves ``[1 - 2^(-J), 1)`` covered once;
``close_tail=True`` appends that cell at ``t(J + 1)``.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Callable

import numpy as np

from .admissibility import AdmissibilityCertificate
from .completion import residue_index
from .errors import KroneckerSearchFailed
from .lattice import Lattice, integer_lattice, make_lattice
from .multitile import MultiTileSet, Piece
from .oracle import kronecker_search
from .region import UnitRegion

__all__ = [
    "dyadic_piece",
    "example_2_10",
    "example_2_11",
    "example_kronecker",
    "box_k_tile",
    "random_admissible_subtile",
    "GENERATORS",
]


def dyadic_piece(j: int) -> UnitRegion:
    """``I_j = [(2^j - 2) / 2^j, (2^j - 1) / 2^j)``."""
    den = 2**j
    return UnitRegion.interval(Fraction(den - 2, den), Fraction(den - 1, den))


def tail_cell(J: int) -> UnitRegion:
    return UnitRegion.interval(Fraction(2**J - 1, 2**J), 1)


def _two_tile(J: int, translate: Callable[[int], int], close_tail: bool) -> MultiTileSet:
    if J < 0:
        raise ValueError("truncation level must be >= 0")
    lat = integer_lattice(1)
    pieces = [Piece(UnitRegion.full(1), (0,))]
    pieces += [Piece(dyadic_piece(j), (translate(j),)) for j in range(1, J + 1)]
    if close_tail:
        pieces.append(Piece(tail_cell(J), (translate(J + 1),)))
    return MultiTileSet.build(lat, pieces)


def example_2_10(J: int, close_tail: bool = False) -> MultiTileSet:
    """``[0,1)`` plus ``I_j + j``: a 2-tile that admits no certificate."""
    return _two_tile(J, lambda j: j, close_tail)


def example_2_11(J: int, close_tail: bool = False) -> MultiTileSet:
    """``[0,1)`` plus ``I_j + 2j + 1``: admissible with ``n = 2, v = 1``."""
    return _two_tile(J, lambda j: 2 * j + 1, close_tail)


def example_kronecker(
    J: int,
    a: tuple[float, float] = (math.sqrt(2), math.sqrt(3)),
    beta: tuple[float, float] = (0.25, 0.75),
    eps: float = 0.1,
    m_max: int = 10**6,
    close_tail: bool = False,
) -> MultiTileSet:
    """``[0,1)`` plus ``I_j + j m_j`` with ``m_j`` from :func:`kronecker_search`.

    Any two distinct ``beta`` values give an invertible target matrix; the
    defaults make it a scaled unitary.
    """
    cache: dict[int, int] = {}

    def translate(j: int) -> int:
        if j not in cache:
            m = kronecker_search(a, j, beta, eps, m_max)
            if m is None:
                raise KroneckerSearchFailed(j)
            cache[j] = j * m
        return cache[j]

    return _two_tile(J, translate, close_tail)


def box_k_tile(k: int, lattice: Lattice | None = None) -> MultiTileSet:
    """The full cell at translates ``0, e_1, ..., (k-1) e_1``."""
    if k < 1:
        raise ValueError("k must be >= 1")
    lat = lattice or integer_lattice(1)
    full = UnitRegion.full(lat.dim)
    return MultiTileSet.build(
        lat, [Piece(full, (i,) + (0,) * (lat.dim - 1)) for i in range(k)]
    )


def _random_lattice(rng: np.random.Generator, d: int) -> Lattice:
    while True:
        rows = [
            [Fraction(int(rng.integers(-4, 5)), int(rng.integers(1, 4))) for _ in range(d)]
            for _ in range(d)
        ]
        for i in range(d):
            if rows[i][i] == 0:
                rows[i][i] = Fraction(1)
        try:
            return make_lattice(rows)
        except ValueError:
            continue


def _random_grid_cells(rng: np.random.Generator, d: int, max_cuts: int = 5):
    axes = []
    for _ in range(d):
        den = int(rng.choice([3, 4, 6, 8, 12]))
        cuts = sorted(set(int(x) for x in rng.integers(1, den, size=int(rng.integers(0, max_cuts + 1)))))
        axes.append([Fraction(0)] + [Fraction(c, den) for c in cuts] + [Fraction(1)])
    shape = [len(a) - 1 for a in axes]
    for idx in np.ndindex(*shape):
        lo = tuple(axes[i][idx[i]] for i in range(d))
        hi = tuple(axes[i][idx[i] + 1] for i in range(d))
        yield UnitRegion.from_boxes(d, [(lo, hi)])


def random_admissible_subtile(
    rng: np.random.Generator, d: int, k: int
) -> tuple[MultiTileSet, AdmissibilityCertificate]:
    """A random ``(n, v)``-admissible ``k``-subtile with its certificate.

    Cut the cube into grid cells, give each cell up to ``k`` lattice points
    with pairwise distinct residues, and take the union of the translates.
    Some cells are left empty so the result is usually a strict subtile.
    """
    lat = _random_lattice(rng, d)
    while True:
        n = int(rng.integers(max(k, 2), 8))
        w = tuple(int(x) for x in rng.integers(-3, 4, size=d))
        if not any(w):
            continue
        cert = AdmissibilityCertificate(n, w)
        if len(residue_index(cert).achievable) >= k:
            break
    pieces = []
    for cell in _random_grid_cells(rng, d):
        size = int(rng.integers(0, k + 1))
        used: set[int] = set()
        chosen: set[tuple[int, ...]] = set()
        attempts = 0
        while len(chosen) < size and attempts < 200:
            attempts += 1
            z = tuple(int(x) for x in rng.integers(-6, 7, size=d))
            r = cert.residue(z)
            if r in used or z in chosen:
                continue
            used.add(r)
            chosen.add(z)
        pieces += [Piece(cell, z) for z in chosen]
    return MultiTileSet.build(lat, pieces), cert


GENERATORS: dict[str, Callable[..., MultiTileSet]] = {
    "example_2_10": example_2_10,
    "example_2_11": example_2_11,
    "example_kronecker": example_kronecker,
}
