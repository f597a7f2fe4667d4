"""Multi-tiles of lattices and structured exponential Riesz bases on them."""

__version__ = "0.1.0"

from .lattice import Lattice, dual_pairing, make_lattice, integer_lattice
from .region import UnitRegion, intersect, measure, subtract, union
from .multitile import (
    MultiTileSet,
    Piece,
    fiber_partition,
    multiplicity_histogram,
    tiling_level,
)
from .admissibility import (
    AdmissibilityCertificate,
    certify_family,
    check_certificate,
    search_certificate,
)
from .basis import (
    ExponentialSystem,
    build_offsets,
    build_offsets_indexed,
    free_system,
    riesz_bounds,
)
from .completion import complete_to_tile, completion_plan
from . import gallery, oracle

__all__ = [
    "Lattice",
    "make_lattice",
    "integer_lattice",
    "dual_pairing",
    "UnitRegion",
    "union",
    "intersect",
    "subtract",
    "measure",
    "MultiTileSet",
    "Piece",
    "fiber_partition",
    "multiplicity_histogram",
    "tiling_level",
    "AdmissibilityCertificate",
    "check_certificate",
    "search_certificate",
    "certify_family",
    "ExponentialSystem",
    "build_offsets",
    "build_offsets_indexed",
    "free_system",
    "riesz_bounds",
    "completion_plan",
    "complete_to_tile",
    "gallery",
    "oracle",
]
