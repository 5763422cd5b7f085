import itertools
from fractions import Fraction

import pytest

from cubecoup.core.cube_combinatorics import corner, vertices
from cubecoup.core.scalars import ComplexRational
from cubecoup.services.abelian_cubes import Character, CubeGroupSpec, FiniteAbelianGroup
from cubecoup.services.reports import Verdict
from cubecoup.exceptions import CapExceededError, DimensionError


def test_group_arithmetic():
    group = FiniteAbelianGroup((2, 3))
    assert group.order == 6
    assert group.rank == 2
    assert len(group.elements()) == 6
    assert group.add((1, 2), (1, 2)) == (0, 1)
    assert group.neg((1, 1)) == (1, 2)
    assert group.normalize((-1, 7)) == (1, 1)
    assert str(group) == "Z_2×Z_3"
    with pytest.raises(ValueError):
        FiniteAbelianGroup((0,))
    with pytest.raises(DimensionError):
        group.normalize((1,))


def test_characters(z4):
    chi = Character(z4, (1,))
    assert chi((1,)) == ComplexRational(0, 1)
    assert chi((2,)) == -1
    assert chi.phase((3,)) == Fraction(3, 4)
    assert (chi * chi.conj()).is_trivial
    assert len(z4.characters()) == 4
    assert chi.as_function().mean() == 0


def test_standard_cube_coupling_on_z2(toolkit, z2):
    mu = toolkit.abelian.standard_cube_coupling(z2, 2)
    assert mu.labels == tuple(vertices(2))
    assert len(mu) == 8
    assert all(value == Fraction(1, 8) for value in mu.mass.values())
    assert len(toolkit.abelian.standard_cube_coupling(z2, 1)) == 4


def test_standard_cube_coupling_counts_repeated_parameters(toolkit, z3):
    mu = toolkit.abelian.standard_cube_coupling(z3, 0)
    assert dict(mu.mass) == {((0,),): Fraction(1, 3), ((1,),): Fraction(1, 3), ((2,),): Fraction(1, 3)}
    square = toolkit.abelian.standard_cube_coupling(z3, 2)
    assert len(square) == 27


def test_cube_enumeration_cap(toolkit):
    with pytest.raises(CapExceededError):
        toolkit.abelian.cube_points(FiniteAbelianGroup.cyclic(20), 3)


@pytest.mark.parametrize("n,k,order", [
    (2, 1, 8),
    (2, 2, 16),
    (1, 1, 4),
    (2, 0, 2),
    (2, -1, 1),
])
def test_degree_cube_group_orders(toolkit, z2, n, k, order):
    assert len(toolkit.abelian.degree_cube_group(CubeGroupSpec(z2, n, k))) == order


def test_rooted_cube_membership(toolkit, z3):
    spec = CubeGroupSpec(z3, 2, 1, rooted=True)
    assert toolkit.abelian.is_cube({(0, 0): (0,), (1, 0): (1,), (0, 1): (2,), (1, 1): (0,)}, spec)
    assert not toolkit.abelian.is_cube({(0, 0): (1,), (1, 0): (2,), (0, 1): (0,), (1, 1): (1,)}, spec)
    assert len(toolkit.abelian.degree_cube_group(spec)) == 9


def test_annihilator_on_z3_constants(toolkit, z3):
    spec = CubeGroupSpec(z3, 1, 0)
    equal = {(0,): Character(z3, (1,)), (1,): Character(z3, (1,))}
    different = {(0,): Character(z3, (1,)), (1,): Character(z3, (2,))}
    assert toolkit.abelian.annihilates(equal, spec)
    assert toolkit.abelian.dual_criterion(equal, spec)
    assert not toolkit.abelian.annihilates(different, spec)
    assert not toolkit.abelian.dual_criterion(different, spec)


def test_rooted_annihilator_needs_only_the_corner(toolkit, z2):
    spec = CubeGroupSpec(z2, 2, 1, rooted=True)
    chi = Character(z2, (1,))
    eta = {v: chi for v in corner(2)}
    assert toolkit.abelian.annihilates(eta, spec)
    with pytest.raises(DimensionError):
        toolkit.abelian.annihilates({(1, 0): chi}, spec)


@pytest.mark.parametrize("orders,n,k,rooted", list(itertools.product(
    [(2,), (3,), (4,), (2, 2)], range(3), [-1, 0, 1, 2], [False, True],
)))
def test_annihilator_criterion_matches_enumeration(toolkit, orders, n, k, rooted):
    result = toolkit.abelian.cross_check(CubeGroupSpec(FiniteAbelianGroup(orders), n, k, rooted))
    assert result.verdict == Verdict.PASS
    assert result.values["checked"] > 0


def test_functions_from_values(toolkit, z4):
    f = toolkit.abelian.function_from_values(z4, {(5,): 1})
    assert f((1,)) == 1
    assert f.mean() == Fraction(1, 4)
    g = toolkit.abelian.function_from_list(z4, [1, 0, 0, 0])
    assert g((0,)) == 1
    with pytest.raises(DimensionError):
        toolkit.abelian.function_from_list(z4, [1, 0])
