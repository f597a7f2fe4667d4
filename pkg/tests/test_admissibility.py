from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import multitile_sets
from exobasis.admissibility import (
    AdmissibilityCertificate,
    candidate_vectors,
    certify_family,
    check_certificate,
    search_certificate,
)
from exobasis.errors import DimensionMismatch, GeneratorInconsistent
from exobasis.gallery import box_k_tile, dyadic_piece, example_2_10, example_2_11
from exobasis.lattice import dual_pairing, integer_lattice
from exobasis.multitile import MultiTileSet, Piece, fiber_partition
from exobasis.region import UnitRegion


def brute_valid(part, n, w):
    for c in part.classes:
        res = [sum(a * b for a, b in zip(w, lam)) % n for lam in c.points]
        if len(set(res)) != len(res):
            return False
    return True


def test_2_11_valid_up_to_1000():
    part = fiber_partition(example_2_11(1000))
    assert check_certificate(part, AdmissibilityCertificate(2, (1,))).valid


@pytest.mark.parametrize("n", [2, 3, 7])
def test_2_10_invalid_with_witness(n):
    part = fiber_partition(example_2_10(n + 2))
    result = check_certificate(part, AdmissibilityCertificate(n, (1,)))
    assert not result.valid
    hit = [v for v in result.violations if v.class_region == dyadic_piece(n)]
    assert hit and hit[0].points == ((0,), (n,))


def test_singleton_classes_always_valid():
    part = fiber_partition(box_k_tile(1))
    for n, w in [(1, (0,)), (5, (3,)), (9, (-2,))]:
        assert check_certificate(part, AdmissibilityCertificate(n, w))


def test_certificate_validation():
    with pytest.raises(ValueError):
        AdmissibilityCertificate(0, (1,))
    with pytest.raises(ValueError):
        AdmissibilityCertificate(3, (0,))
    with pytest.raises(DimensionMismatch):
        check_certificate(fiber_partition(box_k_tile(1)), AdmissibilityCertificate(2, (1, 1)))


def test_search_examples():
    cert = search_certificate(fiber_partition(box_k_tile(1)), 5, 5)
    assert cert.n == 1
    assert search_certificate(fiber_partition(example_2_11(20)), 10, 10) == AdmissibilityCertificate(2, (1,))
    assert search_certificate(fiber_partition(example_2_10(50)), 50, 50) is None


def test_candidate_order():
    assert candidate_vectors(1, 2) == [(0,), (1,), (-1,), (2,), (-2,)]
    c2 = candidate_vectors(2, 1)
    assert c2[0] == (0, 0) and len(c2) == 9 and len(set(c2)) == 9
    norms = [max(map(abs, w)) for w in candidate_vectors(2, 3)]
    assert norms == sorted(norms)


@settings(max_examples=60, deadline=None)
@given(
    st.integers(1, 2).flatmap(multitile_sets),
    st.integers(1, 9),
    st.lists(st.integers(-4, 4), min_size=2, max_size=2),
    st.lists(st.integers(-3, 3), min_size=2, max_size=2),
)
def test_check_matches_brute_and_is_invariant(omega, n, w, u):
    d = omega.lattice.dim
    w, u = tuple(w[:d]), tuple(u[:d])
    if n > 1 and not any(w):
        return
    part = fiber_partition(omega)
    cert = AdmissibilityCertificate(n, w)
    result = check_certificate(part, cert)
    assert result.valid == brute_valid(part, n, w)
    for v in result.violations:
        a, b = v.points
        assert a != b
        assert (dual_pairing(w, a) - dual_pairing(w, b)) % n == 0
    shifted = tuple(x + n * y for x, y in zip(w, u))
    if n == 1 or any(shifted):
        assert check_certificate(part, AdmissibilityCertificate(n, shifted)).valid == result.valid


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 2).flatmap(multitile_sets))
def test_search_matches_brute_scan(omega):
    part = fiber_partition(omega)
    d = omega.lattice.dim
    got = search_certificate(part, 6, 2)
    expect = None
    for n in range(1, 7):
        for w in candidate_vectors(d, 2):
            if n > 1 and not any(w):
                continue
            if brute_valid(part, n, w):
                expect = (n, w)
                break
        if expect:
            break
    assert (got.n, got.v) == expect if expect else got is None


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 2).flatmap(multitile_sets), st.integers(2, 6), st.integers(-3, 3))
def test_monotone_under_piece_removal(omega, n, w0):
    if w0 == 0 or not omega.pieces:
        return
    w = (w0,) + (1,) * (omega.lattice.dim - 1)
    cert = AdmissibilityCertificate(n, w)
    if not check_certificate(fiber_partition(omega), cert):
        return
    smaller = MultiTileSet.build(omega.lattice, omega.pieces[1:])
    assert check_certificate(fiber_partition(smaller), cert)


def test_certify_family():
    assert str(certify_family(example_2_11, AdmissibilityCertificate(2, (1,)), 100)) == "PassThrough(100)"
    res = certify_family(example_2_10, AdmissibilityCertificate(5, (1,)), 100)
    assert str(res) == "FailAt(5)"
    assert res.violation.points == ((0,), (5,))
    const = lambda J: box_k_tile(1)
    assert certify_family(const, AdmissibilityCertificate(3, (1,)), 10).passed


def test_certify_family_rejects_shrinking_generator():
    gen = lambda J: example_2_11(10 - J)
    with pytest.raises(GeneratorInconsistent):
        certify_family(gen, AdmissibilityCertificate(2, (1,)), 5)


def test_python_fallback_for_huge_translates():
    big = 2**62
    omega = MultiTileSet.build(
        integer_lattice(1),
        [Piece(UnitRegion.full(1), (0,)), Piece(UnitRegion.full(1), (big + 1,))],
    )
    cert = search_certificate(fiber_partition(omega), 3, 2)
    assert cert == AdmissibilityCertificate(2, (1,))
