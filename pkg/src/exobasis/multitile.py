"""Sets described as lattice translates of pieces of the fundamental domain.

A :class:`MultiTileSet` is the union of ``M (region + z)`` over its pieces.
Its :class:`FiberPartition` groups fundamental-domain points by the set of
translates ``z`` that land them inside the set, which is all the structure
the downstream basis construction needs.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DimensionMismatch
from .lattice import Lattice, LatticePoint
from .region import UnitRegion, refine_labeled, union_all


@dataclass(frozen=True)
class Piece:
    region: UnitRegion
    translate: LatticePoint


@dataclass(frozen=True)
class MultiTileSet:
    lattice: Lattice
    pieces: tuple[Piece, ...]

    @classmethod
    def build(cls, lattice: Lattice, pieces: Iterable[Piece | tuple[UnitRegion, Sequence[int]]]) -> MultiTileSet:
        """Normalize: one piece per translate, empty pieces dropped, sorted by translate."""
        by_translate: dict[LatticePoint, list[UnitRegion]] = defaultdict(list)
        for p in pieces:
            region, z = (p.region, p.translate) if isinstance(p, Piece) else p
            if region.dim != lattice.dim:
                raise DimensionMismatch(
                    f"piece region has dim {region.dim}, lattice has dim {lattice.dim}"
                )
            by_translate[lattice.check_point(z)].append(region)
        out = []
        for z in sorted(by_translate):
            regions = by_translate[z]
            merged = regions[0] if len(regions) == 1 else union_all(lattice.dim, regions)
            if not merged.is_empty():
                out.append(Piece(merged, z))
        return cls(lattice, tuple(out))

    def measure(self) -> Fraction:
        return self.lattice.det_abs * sum((p.region.measure() for p in self.pieces), Fraction(0))

    def piece_at(self, z: Sequence[int]) -> Piece | None:
        z = tuple(z)
        for p in self.pieces:
            if p.translate == z:
                return p
        return None

    def contains(self, other: MultiTileSet) -> bool:
        """Piecewise containment: every piece of ``other`` sits inside the piece with the same translate."""
        for p in other.pieces:
            mine = self.piece_at(p.translate)
            if mine is None or not p.region.issubset(mine.region):
                return False
        return True


@dataclass(frozen=True)
class FiberClass:
    region: UnitRegion
    points: tuple[LatticePoint, ...]


@dataclass(frozen=True)
class FiberPartition:
    lattice: Lattice
    classes: tuple[FiberClass, ...]
    uncovered: UnitRegion

    def measure(self) -> Fraction:
        total = sum((len(c.points) * c.region.measure() for c in self.classes), Fraction(0))
        return total * self.lattice.det_abs


def fiber_partition(omega: MultiTileSet) -> FiberPartition:
    dim = omega.lattice.dim
    atoms, uncovered = refine_labeled(dim, [(p.translate, p.region) for p in omega.pieces])
    classes = tuple(FiberClass(region, tuple(sorted(labels))) for labels, region in atoms)
    return FiberPartition(omega.lattice, classes, uncovered)


def multiplicity_histogram(part: FiberPartition) -> dict[int, Fraction]:
    """Measure (in cube coordinates) of the points covered exactly ``m`` times."""
    hist: dict[int, Fraction] = defaultdict(Fraction)
    for c in part.classes:
        hist[len(c.points)] += c.region.measure()
    zero = part.uncovered.measure()
    if zero > 0:
        hist[0] += zero
    return dict(sorted(hist.items(), reverse=True))


@dataclass(frozen=True)
class TilingLevel:
    kind: str  # "ExactTile" | "SubTile" | "NotTile"
    level: int

    def __str__(self) -> str:
        return f"{self.kind}({self.level})"


def tiling_level(part: FiberPartition) -> TilingLevel:
    hist = multiplicity_histogram(part)
    if len(hist) == 1:
        (k,) = hist
        if k > 0:
            return TilingLevel("ExactTile", k)
    # NotTile is unreachable here: any finite description is a subtile of its top level.
    return TilingLevel("SubTile", max(hist))


def essential_level(part: FiberPartition) -> int:
    """Largest multiplicity attained on a set of positive measure."""
    return max((len(c.points) for c in part.classes), default=0)
