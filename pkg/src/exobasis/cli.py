"""Command-line front end.

Sets travel as JSON on stdin/stdout so commands compose, e.g.::

    exobasis gallery example_2_11 --J 20 | exobasis check-tile

Exit codes: 0 success, 1 a negative finding (invalid certificate, nothing
found, degenerate bounds, failed verification), 2 bad input.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Sequence

import numpy as np

from . import __version__
from .admissibility import AdmissibilityCertificate, check_certificate, search_certificate
from .basis import (
    ExponentialSystem,
    build_offsets,
    build_offsets_indexed,
    free_system,
    riesz_bounds,
)
from .completion import completion_plan, complete_to_tile
from .errors import ExobasisError
from .gallery import box_k_tile, example_2_10, example_2_11, example_kronecker
from .lattice import format_rational
from .multitile import MultiTileSet, fiber_partition, multiplicity_histogram, tiling_level
from .oracle import (
    PolySpec,
    QuadratureConfig,
    default_window,
    frame_inequality_trial,
    gram_section,
    kronecker_distance,
    kronecker_search,
    poly_norm_direct,
    poly_norm_fiber,
    write_quotients_csv,
)
from . import serialize as ser


class InputError(Exception):
    pass


def _g(x: float) -> str:
    return f"{x:.12g}"


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _float_list(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _read_doc(path: str | None):
    if path in (None, "-"):
        text, name = sys.stdin.read(), "<stdin>"
    else:
        try:
            with open(path) as fh:
                text = fh.read()
        except OSError as exc:
            raise InputError(f"cannot read {path}: {exc.strerror}")
        name = path
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{name}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}")


def _read_set(path: str | None) -> MultiTileSet:
    return ser.set_from_json(_read_doc(path))


def _emit(doc) -> None:
    sys.stdout.write(json.dumps(doc, indent=2, sort_keys=False) + "\n")


def _certificate(args) -> AdmissibilityCertificate:
    if args.n is None or args.v is None:
        raise InputError("--n and --v are required")
    return AdmissibilityCertificate(args.n, args.v)


def _system(args, omega: MultiTileSet) -> ExponentialSystem:
    if args.free:
        return free_system(omega.lattice, args.free)
    cert = _certificate(args)
    if args.s:
        return build_offsets_indexed(cert, args.s, omega.lattice)
    if args.k is None:
        raise InputError("--k (or --s / --free) is required")
    return build_offsets(cert, args.k, omega.lattice)


# ---------------------------------------------------------------------------


def cmd_gallery(args) -> int:
    if args.name == "box":
        omega = box_k_tile(args.k or 1)
    elif args.name == "example_2_10":
        omega = example_2_10(args.J, close_tail=args.close_tail)
    elif args.name == "example_2_11":
        omega = example_2_11(args.J, close_tail=args.close_tail)
    else:
        omega = example_kronecker(
            args.J,
            a=(args.a1, args.a2),
            beta=(args.beta1, args.beta2),
            eps=args.eps,
            m_max=args.m_max,
            close_tail=args.close_tail,
        )
    _emit(ser.set_to_json(omega))
    return 0


def cmd_check_tile(args) -> int:
    omega = _read_set(args.input)
    part = fiber_partition(omega)
    hist = multiplicity_histogram(part)
    level = tiling_level(part)
    if args.json:
        _emit(
            {
                "schema": ser.SCHEMA,
                "histogram": ser.histogram_to_json(hist),
                "tiling_level": {"kind": level.kind, "level": level.level},
                "measure": format_rational(omega.measure()),
            }
        )
    else:
        print(f"tiling level: {level}")
        print(f"measure: {format_rational(omega.measure())}")
        for m, meas in hist.items():
            print(f"  multiplicity {m}: {format_rational(meas)}")
    return 0


def cmd_admissible(args) -> int:
    omega = _read_set(args.input)
    part = fiber_partition(omega)
    if args.action == "check":
        cert = _certificate(args)
        result = check_certificate(part, cert)
        if args.json:
            _emit(ser.check_to_json(cert, result))
        elif result.valid:
            print(f"Valid: n={cert.n} v={list(cert.v)}")
        else:
            print(f"Invalid: {len(result.violations)} violation(s)")
            for v in result.violations:
                lo = ", ".join(format_rational(x) for x in v.class_region.boxes[0][0])
                print(f"  residue {v.residue}: {list(v.points[0])} ~ {list(v.points[1])} (class at [{lo}])")
        return 0 if result.valid else 1

    cert = search_certificate(part, args.n_max, args.v_height)
    if args.json:
        _emit({"schema": ser.SCHEMA, **cert.to_json()} if cert else {"schema": ser.SCHEMA, "certificate": None})
    elif cert:
        print(f"found: n={cert.n} v={list(cert.v)}")
    else:
        print(f"none within bounds (n <= {args.n_max}, |v| <= {args.v_height})")
    return 0 if cert else 1


def cmd_build_basis(args) -> int:
    omega = _read_set(args.input)
    part = fiber_partition(omega)
    sys_ = _system(args, omega)
    report = riesz_bounds(part, sys_)
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            ser.write_bounds_csv(fh, report)
    if args.json:
        _emit({**ser.bounds_to_json(report), "system": sys_.to_json()})
    else:
        if sys_.warning:
            print(f"warning: {sys_.warning}")
        a = sys_.offset_vectors()
        for j, row in enumerate(a):
            print(f"a_{j + 1} = ({', '.join(_g(x) for x in row)})")
        print(f"kind: {report.kind}")
        print(f"A = {_g(report.A)}  B = {_g(report.B)}")
        print(f"A_L2 = {_g(report.A_L2)}  B_L2 = {_g(report.B_L2)}")
        print(f"classes: {len(report.per_class)}")
    return 1 if report.kind == "Degenerate" else 0


def cmd_complete(args) -> int:
    omega = _read_set(args.input)
    part = fiber_partition(omega)
    cert = _certificate(args)
    if args.dry_run:
        plan = completion_plan(part, cert, args.k)
        rows = [
            {"region": region.to_json(), "R": [list(p) for p in pts], "add": [list(z) for z in added]}
            for region, pts, added in plan
        ]
        if args.json:
            _emit({"schema": ser.SCHEMA, "additions": rows})
        else:
            for region, pts, added in plan:
                meas = format_rational(region.measure())
                print(f"class R={[list(p) for p in pts]} (measure {meas}): add {[list(z) for z in added]}")
        return 0
    delta = complete_to_tile(part, cert, args.k)
    doc = ser.set_to_json(delta)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(json.dumps(doc, indent=2) + "\n")
    else:
        _emit(doc)
    return 0


def cmd_export(args) -> int:
    part = fiber_partition(_read_set(args.input))
    if args.format == "json":
        _emit(ser.partition_to_json(part))
    else:
        print("class,size,R,measure")
        for i, c in enumerate(part.classes):
            pts = " ".join(",".join(map(str, p)) for p in c.points)
            print(f'{i},{len(c.points)},"{pts}",{format_rational(c.region.measure())}')
    return 0


def cmd_verify(args) -> int:
    if args.check == "kronecker":
        m = kronecker_search((args.a1, args.a2), args.j, (args.beta1, args.beta2), args.eps, args.m_max)
        dist = kronecker_distance((args.a1, args.a2), args.j, m, (args.beta1, args.beta2)) if m is not None else None
        if args.json:
            _emit({"schema": ser.SCHEMA, "m": m, "distance": ser.num(dist) if dist is not None else None})
        elif m is None:
            print(f"none within |m| <= {args.m_max}")
        else:
            print(f"m = {m}  distance = {_g(dist)}")
        return 0 if m is not None else 1

    omega = _read_set(args.input)
    part = fiber_partition(omega)
    sys_ = _system(args, omega)
    q = QuadratureConfig(args.m)

    if args.check == "parseval":
        rng = np.random.default_rng(args.seed)
        worst = 0.0
        rows = []
        for _ in range(args.trials):
            p = PolySpec.random(sys_.k, omega.lattice.dim, args.height, rng)
            direct = poly_norm_direct(omega, sys_, p, q)
            fiber = poly_norm_fiber(part, sys_, p, q)
            rel = abs(direct - fiber) / direct
            worst = max(worst, rel)
            rows.append((direct, fiber, rel))
        ok = worst <= args.tol
        if args.json:
            _emit(
                {
                    "schema": ser.SCHEMA,
                    "trials": [{"direct": ser.num(a), "fiber": ser.num(b), "rel": ser.num(r)} for a, b, r in rows],
                    "max_rel": ser.num(worst),
                    "tol": args.tol,
                    "pass": ok,
                }
            )
        else:
            print(f"max relative difference {_g(worst)} (tol {_g(args.tol)}): {'pass' if ok else 'FAIL'}")
        return 0 if ok else 1

    report = riesz_bounds(part, sys_)
    if args.check == "rayleigh":
        summary = frame_inequality_trial(part, sys_, report, args.trials, args.seed, args.height, q, args.tol)
        if args.csv:
            write_quotients_csv(args.csv, summary)
        if args.json:
            _emit(
                {
                    "schema": ser.SCHEMA,
                    "A": ser.num(report.A),
                    "B": ser.num(report.B),
                    "observed_min": ser.num(summary.observed_min),
                    "observed_max": ser.num(summary.observed_max),
                    "pass": summary.ok,
                }
            )
        else:
            print(f"A = {_g(report.A)}  B = {_g(report.B)}  ({report.kind})")
            print(f"observed quotients in [{_g(summary.observed_min)}, {_g(summary.observed_max)}]: "
                  f"{'pass' if summary.ok else 'FAIL'}")
        return 0 if summary.ok else 1

    # gram
    window = default_window(sys_.k, omega.lattice.dim, args.height)
    lo, hi = gram_section(omega, sys_, window, q)
    lower = report.A_L2 - args.tol
    upper = report.B_L2 + args.tol
    ok = lower <= lo and hi <= upper
    if args.json:
        _emit(
            {
                "schema": ser.SCHEMA,
                "window": len(window),
                "eig_min": ser.num(lo),
                "eig_max": ser.num(hi),
                "A_L2": ser.num(report.A_L2),
                "B_L2": ser.num(report.B_L2),
                "pass": ok,
            }
        )
    else:
        print(f"Gram section of {len(window)} exponentials: eigenvalues in [{_g(lo)}, {_g(hi)}]")
        print(f"expected within [{_g(lower)}, {_g(upper)}]: {'pass' if ok else 'FAIL'}")
    return 0 if ok else 1


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")

    inp = argparse.ArgumentParser(add_help=False)
    inp.add_argument("input", nargs="?", default="-", help="set JSON (default: stdin)")

    cert = argparse.ArgumentParser(add_help=False)
    cert.add_argument("--n", type=int, help="certificate modulus")
    cert.add_argument("--v", type=_int_list, help="certificate vector, integer dual coordinates (comma-separated)")

    system = argparse.ArgumentParser(add_help=False, parents=[cert])
    system.add_argument("--k", type=int, help="number of offsets (j - 1) v / n")
    system.add_argument("--s", type=_int_list, help="indexed offsets s_j v / n (comma-separated)")
    system.add_argument("--free", type=_float_list, action="append", help="free offset vector; repeat per offset")

    kron = argparse.ArgumentParser(add_help=False)
    kron.add_argument("--a1", type=float, default=math.sqrt(2))
    kron.add_argument("--a2", type=float, default=math.sqrt(3))
    kron.add_argument("--beta1", type=float, default=0.25)
    kron.add_argument("--beta2", type=float, default=0.75)
    kron.add_argument("--eps", type=float, default=0.1)
    kron.add_argument("--m-max", type=int, default=10**6)

    p = argparse.ArgumentParser(prog="exobasis", description=__doc__.split("\n\n")[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gallery", parents=[kron], help="emit a named example set as JSON")
    g.add_argument("name", choices=["example_2_10", "example_2_11", "example_kronecker", "box"])
    g.add_argument("--J", type=int, default=10, help="truncation level")
    g.add_argument("--k", type=int, help="level for the box tile")
    g.add_argument("--close-tail", action="store_true", help="cover the truncation tail a second time")
    g.set_defaults(func=cmd_gallery)

    c = sub.add_parser("check-tile", parents=[common, inp], help="multiplicity histogram and tiling level")
    c.set_defaults(func=cmd_check_tile)

    a = sub.add_parser("admissible", help="check or search admissibility certificates")
    asub = a.add_subparsers(dest="action", required=True)
    ac = asub.add_parser("check", parents=[common, inp, cert])
    ac.set_defaults(func=cmd_admissible)
    as_ = asub.add_parser("search", parents=[common, inp])
    as_.add_argument("--n-max", type=int, default=10)
    as_.add_argument("--v-height", type=int, default=10)
    as_.set_defaults(func=cmd_admissible)

    b = sub.add_parser("build-basis", parents=[common, inp, system], help="offsets and exact fiber bounds")
    b.add_argument("--csv", help="also write one row per class to this CSV file")
    b.set_defaults(func=cmd_build_basis)

    cp = sub.add_parser("complete", parents=[common, inp, cert], help="complete a subtile to a k-tile")
    cp.add_argument("--k", type=int, required=True)
    cp.add_argument("--dry-run", action="store_true", help="print per-class additions only")
    cp.add_argument("-o", "--output", help="write the completed set here instead of stdout")
    cp.set_defaults(func=cmd_complete)

    e = sub.add_parser("export", parents=[inp], help="export the fiber partition")
    e.add_argument("--format", choices=["json", "csv"], default="json")
    e.set_defaults(func=cmd_export)

    v = sub.add_parser("verify", help="quadrature and search oracles")
    vsub = v.add_subparsers(dest="check", required=True)
    for name, default_tol, default_m in (("parseval", 1e-6, 256), ("rayleigh", 1e-6, 256), ("gram", 1e-3, 512)):
        vp = vsub.add_parser(name, parents=[common, inp, system])
        vp.add_argument("--m", type=int, default=default_m, help="quadrature points per unit axis")
        vp.add_argument("--height", type=int, default=3 if name != "gram" else 5, help="max |h| of dual indices")
        vp.add_argument("--tol", type=float, default=default_tol)
        if name != "gram":
            vp.add_argument("--seed", type=int, required=True)
            vp.add_argument("--trials", type=int, default=20 if name == "parseval" else 100)
        if name == "rayleigh":
            vp.add_argument("--csv", help="write trial quotients to this CSV file")
        vp.set_defaults(func=cmd_verify)
    vk = vsub.add_parser("kronecker", parents=[common, kron])
    vk.add_argument("--j", type=int, default=1)
    vk.set_defaults(func=cmd_verify)
    return p


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        return args.func(args)
    except (InputError, ExobasisError, ValueError, KeyError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())
