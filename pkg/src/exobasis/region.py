"""Finite unions of half-open rational boxes inside the unit cube.

Every operation works on a tensor grid built from the breakpoints of its
operands: boxes are painted onto a boolean cell mask, masks are combined,
and the result is read back in canonical form.  The canonical form sweeps
axis 0, merges consecutive slabs whose cross-sections agree, and recurses on
the cross-section, so two regions describing the same set (up to measure
zero) always compare equal.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable, Iterable, Sequence

import numpy as np

from .errors import DimensionMismatch, MalformedBox
from .lattice import format_rational, parse_rational

Box = tuple[tuple[Fraction, ...], tuple[Fraction, ...]]


@dataclass(frozen=True)
class UnitRegion:
    dim: int
    boxes: tuple[Box, ...]

    @classmethod
    def from_boxes(cls, dim: int, boxes: Iterable[tuple[Sequence, Sequence]]) -> UnitRegion:
        checked = [_check_box(dim, lo, hi) for lo, hi in boxes]
        if not checked:
            return cls(dim, ())
        axes = _axes_of(dim, [checked])
        return _from_mask(axes, _paint(axes, checked))

    @classmethod
    def full(cls, dim: int) -> UnitRegion:
        return cls(dim, (((Fraction(0),) * dim, (Fraction(1),) * dim),))

    @classmethod
    def empty(cls, dim: int) -> UnitRegion:
        return cls(dim, ())

    @classmethod
    def interval(cls, lo, hi) -> UnitRegion:
        return cls.from_boxes(1, [((lo,), (hi,))])

    def is_empty(self) -> bool:
        return not self.boxes

    def measure(self) -> Fraction:
        return measure(self)

    def breakpoints(self) -> list[set[Fraction]]:
        pts: list[set[Fraction]] = [set() for _ in range(self.dim)]
        for lo, hi in self.boxes:
            for i in range(self.dim):
                pts[i].add(lo[i])
                pts[i].add(hi[i])
        return pts

    def issubset(self, other: UnitRegion) -> bool:
        return subtract(self, other).is_empty()

    def __or__(self, other: UnitRegion) -> UnitRegion:
        return union(self, other)

    def __and__(self, other: UnitRegion) -> UnitRegion:
        return intersect(self, other)

    def __sub__(self, other: UnitRegion) -> UnitRegion:
        return subtract(self, other)

    def to_json(self) -> dict:
        return {
            "boxes": [
                {"lo": [format_rational(x) for x in lo], "hi": [format_rational(x) for x in hi]}
                for lo, hi in self.boxes
            ]
        }

    @classmethod
    def from_json(cls, doc: dict, dim: int) -> UnitRegion:
        return cls.from_boxes(dim, [(b["lo"], b["hi"]) for b in doc["boxes"]])


def _check_box(dim: int, lo: Sequence, hi: Sequence) -> Box:
    if len(lo) != dim or len(hi) != dim:
        raise DimensionMismatch(f"box corners must have {dim} coordinates")
    lo_q = tuple(parse_rational(x) for x in lo)
    hi_q = tuple(parse_rational(x) for x in hi)
    for a, b in zip(lo_q, hi_q):
        if not (0 <= a < b <= 1):
            raise MalformedBox(
                f"need 0 <= lo < hi <= 1 in every coordinate, got [{a}, {b})"
            )
    return lo_q, hi_q


def _axes_of(dim: int, box_lists: Iterable[Sequence[Box]]) -> list[list[Fraction]]:
    pts: list[set[Fraction]] = [set() for _ in range(dim)]
    for boxes in box_lists:
        for lo, hi in boxes:
            for i in range(dim):
                pts[i].add(lo[i])
                pts[i].add(hi[i])
    return [sorted(p) for p in pts]


def _paint(axes: list[list[Fraction]], boxes: Sequence[Box]) -> np.ndarray:
    mask = np.zeros([max(len(a) - 1, 0) for a in axes], dtype=bool)
    for lo, hi in boxes:
        idx = tuple(
            slice(bisect_left(ax, a), bisect_left(ax, b)) for ax, a, b in zip(axes, lo, hi)
        )
        mask[idx] = True
    return mask


def _canonical(axes: list[list[Fraction]], mask: np.ndarray) -> tuple[Box, ...]:
    ax0 = axes[0]
    if len(axes) == 1:
        out = []
        i, n = 0, mask.shape[0]
        while i < n:
            if not mask[i]:
                i += 1
                continue
            j = i
            while j < n and mask[j]:
                j += 1
            out.append(((ax0[i],), (ax0[j],)))
            i = j
        return tuple(out)

    out: list[Box] = []
    start, current = 0, None
    n = mask.shape[0]
    for i in range(n + 1):
        section = _canonical(axes[1:], mask[i]) if i < n else None
        if section != current:
            if current:
                for lo, hi in current:
                    out.append(((ax0[start],) + lo, (ax0[i],) + hi))
            start, current = i, section
    return tuple(out)


def _from_mask(axes: list[list[Fraction]], mask: np.ndarray) -> UnitRegion:
    if mask.size == 0 or not mask.any():
        return UnitRegion(len(axes), ())
    return UnitRegion(len(axes), _canonical(axes, mask))


def _same_dim(a: UnitRegion, b: UnitRegion) -> None:
    if a.dim != b.dim:
        raise DimensionMismatch(f"region dims differ: {a.dim} vs {b.dim}")


def _binary(a: UnitRegion, b: UnitRegion, op) -> UnitRegion:
    _same_dim(a, b)
    axes = _axes_of(a.dim, [a.boxes, b.boxes])
    if any(len(ax) < 2 for ax in axes):
        return UnitRegion(a.dim, ())
    return _from_mask(axes, op(_paint(axes, a.boxes), _paint(axes, b.boxes)))


def union(a: UnitRegion, b: UnitRegion) -> UnitRegion:
    return _binary(a, b, np.logical_or)


def intersect(a: UnitRegion, b: UnitRegion) -> UnitRegion:
    return _binary(a, b, np.logical_and)


def subtract(a: UnitRegion, b: UnitRegion) -> UnitRegion:
    return _binary(a, b, lambda x, y: x & ~y)


def measure(a: UnitRegion) -> Fraction:
    total = Fraction(0)
    for lo, hi in a.boxes:
        vol = Fraction(1)
        for x, y in zip(lo, hi):
            vol *= y - x
        total += vol
    return total


def union_all(dim: int, regions: Iterable[UnitRegion]) -> UnitRegion:
    regions = list(regions)
    for r in regions:
        if r.dim != dim:
            raise DimensionMismatch(f"region dims differ: {dim} vs {r.dim}")
    boxes = [bx for r in regions for bx in r.boxes]
    if not boxes:
        return UnitRegion(dim, ())
    axes = _axes_of(dim, [boxes])
    return _from_mask(axes, _paint(axes, boxes))


def refine_labeled(
    dim: int, parts: Sequence[tuple[Hashable, UnitRegion]]
) -> tuple[list[tuple[frozenset, UnitRegion]], UnitRegion]:
    """Split the cube by which labelled parts cover each point.

    Returns ``(atoms, uncovered)``: one atom per distinct non-empty set of
    covering labels, each with positive measure, ordered by their first box;
    ``uncovered`` is the part of ``[0,1)^dim`` no input touches.
    """
    for _, r in parts:
        if r.dim != dim:
            raise DimensionMismatch(f"region dims differ: {dim} vs {r.dim}")
    full = UnitRegion.full(dim)
    axes = _axes_of(dim, [full.boxes] + [r.boxes for _, r in parts])
    shape = [len(a) - 1 for a in axes]
    n_cells = int(np.prod(shape))
    if not parts:
        return [], full
    stack = np.stack([_paint(axes, r.boxes).reshape(n_cells) for _, r in parts])
    packed = np.packbits(stack, axis=0).T.copy()
    signatures, inverse = np.unique(packed, axis=0, return_inverse=True)
    inverse = inverse.reshape(n_cells)

    atoms = []
    uncovered = UnitRegion(dim, ())
    for s, sig in enumerate(signatures):
        cells = (inverse == s).reshape(shape)
        region = _from_mask(axes, cells)
        if not sig.any():
            uncovered = region
            continue
        members = np.flatnonzero(stack[:, np.flatnonzero(inverse == s)[0]])
        atoms.append((frozenset(parts[i][0] for i in members), region))
    atoms.sort(key=lambda item: item[1].boxes[0][0])
    return atoms, uncovered


def refine(parts: Sequence[UnitRegion]) -> list[UnitRegion]:
    """Atoms of the Boolean algebra generated by ``parts``."""
    if not parts:
        return []
    dim = parts[0].dim
    atoms, _ = refine_labeled(dim, list(enumerate(parts)))
    return [region for _, region in atoms]
