"""Extend an admissible k-subtile to an admissible k-tile.

Each fiber class ``D_R`` (including the uncovered part, with ``R`` empty)
receives extra translates whose residues fill up the missing residue
classes, so the completed set covers every point of the fundamental domain
exactly ``k`` times with pairwise distinct residues.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product
from typing import Collection, Sequence

from .admissibility import AdmissibilityCertificate, check_certificate
from .errors import CertificateInvalid, ClassTooLarge, NotEnoughResidues, Unachievable
from .lattice import Lattice, LatticePoint
from .multitile import FiberPartition, MultiTileSet, Piece
from .region import UnitRegion


@dataclass(frozen=True)
class ResidueClassIndex:
    n: int
    achievable: tuple[int, ...]


def residue_index(cert: AdmissibilityCertificate) -> ResidueClassIndex:
    """Residues ``w . z mod n`` reachable by some lattice point ``z``.

    The image of ``z -> w . z`` is ``gcd(w) Z``, so modulo ``n`` it is the
    subgroup generated by ``gcd(w, n)``.
    """
    g = math.gcd(math.gcd(*cert.v) if cert.v else 0, cert.n)
    return ResidueClassIndex(cert.n, tuple(range(0, cert.n, g)))


def residue_of_class(points: Sequence[LatticePoint], cert: AdmissibilityCertificate) -> set[int]:
    return {cert.residue(lam) for lam in points}


def _shell(d: int, radius: int):
    if radius == 0:
        yield (0,) * d
        return
    for z in product(range(-radius, radius + 1), repeat=d):
        if max(abs(x) for x in z) == radius:
            yield z


def representative(
    r: int,
    cert: AdmissibilityCertificate,
    lattice: Lattice,
    forbidden: Collection[LatticePoint] = (),
) -> LatticePoint:
    """Smallest max-norm lattice point with residue ``r``, lexicographic on ties."""
    r %= cert.n
    if r not in residue_index(cert).achievable:
        raise Unachievable(f"residue {r} is not reachable mod {cert.n} with v={list(cert.v)}")
    forbidden = set(map(tuple, forbidden))
    radius = 0
    while True:
        for z in _shell(lattice.dim, radius):
            if z not in forbidden and cert.residue(z) == r:
                return z
        radius += 1


def completion_plan(
    part: FiberPartition, cert: AdmissibilityCertificate, k: int
) -> list[tuple[UnitRegion, tuple[LatticePoint, ...], tuple[LatticePoint, ...]]]:
    """Per class: ``(region, existing points, points to add)``; uncovered part last."""
    if not check_certificate(part, cert).valid:
        raise CertificateInvalid("certificate is not valid on the input partition")
    idx = residue_index(cert)
    if len(idx.achievable) < k:
        raise NotEnoughResidues(
            f"only {len(idx.achievable)} residues are reachable mod {cert.n}, need {k}; "
            "choose a larger n"
        )
    cells = [(c.region, c.points) for c in part.classes]
    if not part.uncovered.is_empty():
        cells.append((part.uncovered, ()))
    plan = []
    for region, points in cells:
        if len(points) > k:
            raise ClassTooLarge(f"class has {len(points)} points, more than k={k}")
        used = residue_of_class(points, cert)
        missing = [r for r in idx.achievable if r not in used][: k - len(points)]
        chosen: list[LatticePoint] = []
        for r in missing:
            chosen.append(representative(r, cert, part.lattice, forbidden=set(points) | set(chosen)))
        plan.append((region, tuple(points), tuple(chosen)))
    return plan


def complete_to_tile(part: FiberPartition, cert: AdmissibilityCertificate, k: int) -> MultiTileSet:
    """The set ``union over classes of D_R + (R | R')``, normalized."""
    pieces = [
        Piece(region, z)
        for region, points, added in completion_plan(part, cert, k)
        for z in points + added
    ]
    return MultiTileSet.build(part.lattice, pieces)
