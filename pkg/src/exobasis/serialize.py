"""JSON and CSV documents exchanged by the command-line tools."""

from __future__ import annotations

import csv
from typing import Any

from .admissibility import AdmissibilityCertificate, CertificateCheck
from .basis import BoundsReport
from .errors import SchemaError
from .lattice import Lattice, format_rational
from .multitile import FiberPartition, MultiTileSet, Piece
from .region import UnitRegion

SCHEMA = "exobasis/1"


def num(x: float) -> float:
    """Round to 12 significant digits so repeated runs print identical bytes."""
    return float(f"{x:.12g}")


def _check_schema(doc: Any) -> None:
    if not isinstance(doc, dict):
        raise SchemaError("expected a JSON object at top level")
    tag = doc.get("schema", SCHEMA)
    if tag != SCHEMA:
        raise SchemaError(f"unsupported schema {tag!r}; expected {SCHEMA!r}")


def set_to_json(omega: MultiTileSet) -> dict:
    return {
        "schema": SCHEMA,
        "lattice": omega.lattice.to_json(),
        "pieces": [
            {"region": p.region.to_json(), "translate": list(p.translate)} for p in omega.pieces
        ],
    }


def set_from_json(doc: dict) -> MultiTileSet:
    _check_schema(doc)
    try:
        lat = Lattice.from_json(doc["lattice"])
        pieces = [
            Piece(UnitRegion.from_json(p["region"], lat.dim), tuple(int(x) for x in p["translate"]))
            for p in doc["pieces"]
        ]
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"malformed set document: {exc!r}") from exc
    return MultiTileSet.build(lat, pieces)


def partition_to_json(part: FiberPartition) -> dict:
    return {
        "schema": SCHEMA,
        "lattice": part.lattice.to_json(),
        "classes": [
            {"region": c.region.to_json(), "R": [list(p) for p in c.points]} for c in part.classes
        ],
        "uncovered": part.uncovered.to_json(),
    }


def histogram_to_json(hist: dict) -> dict:
    return {str(k): format_rational(v) for k, v in hist.items()}


def certificate_from_json(doc: dict) -> AdmissibilityCertificate:
    return AdmissibilityCertificate(int(doc["n"]), tuple(int(x) for x in doc["v"]))


def check_to_json(cert: AdmissibilityCertificate, result: CertificateCheck) -> dict:
    if result.valid:
        return {"schema": SCHEMA, "valid": True, **cert.to_json()}
    return {
        "schema": SCHEMA,
        "valid": False,
        **cert.to_json(),
        "violations": [v.to_json() for v in result.violations],
    }


def bounds_to_json(report: BoundsReport) -> dict:
    return {
        "schema": SCHEMA,
        "A": num(report.A),
        "B": num(report.B),
        "A_L2": num(report.A_L2),
        "B_L2": num(report.B_L2),
        "kind": report.kind,
        "classes": [
            {
                "R": [list(p) for p in row.fiber.points],
                "residues": list(row.residues) if row.residues is not None else None,
                "eig_min": num(row.eig_min),
                "eig_max": num(row.eig_max),
            }
            for row in report.per_class
        ],
    }


BOUNDS_CSV_COLUMNS = ["class", "size", "R", "residues", "measure", "eig_min", "eig_max"]


def write_bounds_csv(fh, report: BoundsReport) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(BOUNDS_CSV_COLUMNS)
    for i, row in enumerate(report.per_class):
        w.writerow(
            [
                i,
                len(row.fiber.points),
                " ".join(",".join(map(str, p)) for p in row.fiber.points),
                " ".join(map(str, row.residues)) if row.residues is not None else "",
                format_rational(row.fiber.region.measure()),
                f"{row.eig_min:.12g}",
                f"{row.eig_max:.12g}",
            ]
        )
