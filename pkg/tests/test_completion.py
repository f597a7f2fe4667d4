from fractions import Fraction

import numpy as np
import pytest

from exobasis.admissibility import AdmissibilityCertificate, check_certificate
from exobasis.completion import (
    complete_to_tile,
    completion_plan,
    representative,
    residue_index,
    residue_of_class,
)
from exobasis.errors import CertificateInvalid, ClassTooLarge, NotEnoughResidues, Unachievable
from exobasis.gallery import box_k_tile, example_2_10, example_2_11, random_admissible_subtile
from exobasis.lattice import integer_lattice
from exobasis.multitile import MultiTileSet, Piece, fiber_partition, tiling_level
from exobasis.region import UnitRegion

Z1 = integer_lattice(1)
C21 = AdmissibilityCertificate(2, (1,))


def test_residue_of_class():
    assert residue_of_class(((0,),), AdmissibilityCertificate(3, (1,))) == {0}
    assert residue_of_class(((0,), (3,)), C21) == {0, 1}
    assert residue_of_class(((0,), (5,)), AdmissibilityCertificate(5, (1,))) == {0}


def test_representative():
    assert representative(0, C21, Z1) == (0,)
    assert representative(1, C21, Z1) == (-1,)
    assert representative(1, C21, Z1, forbidden={(-1,)}) == (1,)
    c = AdmissibilityCertificate(4, (2,))
    assert residue_index(c).achievable == (0, 2)
    with pytest.raises(Unachievable):
        representative(1, c, Z1)


def test_exact_tile_unchanged():
    omega = box_k_tile(2)
    assert complete_to_tile(fiber_partition(omega), C21, 2) == omega


def test_2_11_completion_adds_tail():
    J = 12
    part = fiber_partition(example_2_11(J))
    plan = completion_plan(part, C21, 2)
    added = [(r, a) for r, _, a in plan if a]
    assert added == [(UnitRegion.interval(1 - Fraction(1, 2**J), 1), ((-1,),))]
    delta = complete_to_tile(part, C21, 2)
    assert str(tiling_level(fiber_partition(delta))) == "ExactTile(2)"


def test_empty_set_completion():
    part = fiber_partition(MultiTileSet.build(Z1, []))
    delta = complete_to_tile(part, C21, 2)
    full = UnitRegion.full(1)
    assert delta == MultiTileSet.build(Z1, [Piece(full, (0,)), Piece(full, (-1,))])


def test_errors():
    with pytest.raises(CertificateInvalid):
        complete_to_tile(fiber_partition(example_2_10(4)), C21, 2)
    with pytest.raises(NotEnoughResidues):
        complete_to_tile(fiber_partition(example_2_11(3)), AdmissibilityCertificate(4, (2,)), 3)
    with pytest.raises(ClassTooLarge):
        complete_to_tile(fiber_partition(box_k_tile(3)), AdmissibilityCertificate(3, (1,)), 2)


@pytest.mark.parametrize("seed", range(20))
def test_completion_postconditions(seed):
    rng = np.random.default_rng(1000 + seed)
    d, k = int(rng.integers(1, 3)), int(rng.integers(1, 5))
    omega, cert = random_admissible_subtile(rng, d, k)
    part = fiber_partition(omega)
    delta = complete_to_tile(part, cert, k)
    dpart = fiber_partition(delta)
    assert delta.contains(omega)
    assert str(tiling_level(dpart)) == f"ExactTile({k})"
    assert check_certificate(dpart, cert).valid
    assert delta.measure() == k * omega.lattice.det_abs
    assert complete_to_tile(dpart, cert, k) == delta
