import sys
from fractions import Fraction
from itertools import product

from hypothesis import strategies as st

from exobasis.lattice import integer_lattice, make_lattice
from exobasis.multitile import MultiTileSet, Piece
from exobasis.region import UnitRegion

DEN = 6


def grid_box(d):
    def make(pairs):
        lo = tuple(Fraction(min(a, b), DEN) for a, b in pairs)
        hi = tuple(Fraction(max(a, b), DEN) for a, b in pairs)
        return UnitRegion.from_boxes(d, [(lo, hi)])

    pair = st.tuples(st.integers(0, DEN), st.integers(0, DEN)).filter(lambda p: p[0] != p[1])
    return st.lists(pair, min_size=d, max_size=d).map(make)


def multitile_sets(d, max_pieces=6, span=4):
    piece = st.tuples(grid_box(d), st.lists(st.integers(-span, span), min_size=d, max_size=d).map(tuple))
    lat = integer_lattice(d) if d == 1 else make_lattice([[1, "1/2"], [0, 2]])
    return st.lists(piece, max_size=max_pieces).map(
        lambda ps: MultiTileSet.build(lat, [Piece(r, z) for r, z in ps])
    )


def probes(d):
    ticks = [Fraction(2 * i + 1, 2 * DEN) for i in range(DEN)]
    return list(product(ticks, repeat=d))


def inside(region, x):
    return any(all(lo[i] <= x[i] < hi[i] for i in range(len(x))) for lo, hi in region.boxes)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not getattr(mod, "RESULTS", None):
        return
    terminalreporter.section("acceptance")
    for line in mod.RESULTS:
        terminalreporter.write_line(line)
