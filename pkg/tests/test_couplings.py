import itertools
from fractions import Fraction

import pytest
from hypothesis import given

from cubecoup.core.couplings import (
    Coupling,
    completely_dependent,
    diagonal_coupling,
    factor_coupling,
    glue_cond_independent,
    idempotence_witness,
    index_cond_independent,
    inner_product,
    is_idempotent,
    is_isomorphic,
    is_local,
    product_coupling,
    recover_factor,
    relative_square,
    subcoupling,
    xi,
)
from cubecoup.core.cube_combinatorics import vertices
from cubecoup.core.finite_measure import FiniteProbSpace, FunctionOnSpace, Partition
from cubecoup.exceptions import CouplingError

from .conftest import spaces_with_partitions


def perturbed(t):
    space = FiniteProbSpace.uniform([0, 1])
    diagonal = Fraction(1, 2) - t
    return Coupling(space, ("a", "b"), {(0, 0): diagonal, (1, 1): diagonal, (0, 1): t, (1, 0): t})


def test_coupling_validation():
    space = FiniteProbSpace.uniform([0, 1])
    with pytest.raises(CouplingError):
        Coupling(space, ("a", "b"), {(0, 0): Fraction(1, 2), (0, 1): Fraction(1, 2)})
    with pytest.raises(CouplingError):
        Coupling(space, ("a", "b"), {(0, 0): Fraction(1, 2)})
    with pytest.raises(CouplingError):
        Coupling(space, ("a", "a"), {(0, 0): Fraction(1, 2), (1, 1): Fraction(1, 2)})
    with pytest.raises(CouplingError):
        Coupling(space, ("a",), {(2,): Fraction(1)})


def test_xi(z2, toolkit):
    mu = toolkit.abelian.standard_cube_coupling(z2, 2)
    space = mu.base
    zero = FunctionOnSpace.indicator(space, [(0,)])
    assert xi(mu, {v: zero for v in vertices(2)}) == Fraction(1, 8)
    one = FunctionOnSpace.constant(space, 1)
    assert xi(mu, {v: one for v in vertices(2)}) == 1


def test_xi_on_product_factorizes(uniform3):
    f = FunctionOnSpace(uniform3, [1, 2, 3])
    g = FunctionOnSpace(uniform3, [0, 0, 3])
    assert xi(product_coupling(uniform3, ("a", "b")), {"a": f, "b": g}) == f.mean() * g.mean()


def test_subcoupling(z2, toolkit):
    mu = toolkit.abelian.standard_cube_coupling(z2, 2)
    edge = subcoupling(mu, [(0, 0), (1, 0)])
    assert edge.equals(product_coupling(mu.base, [(0, 0), (1, 0)]))
    assert subcoupling(mu, list(mu.labels)).equals(mu)
    single = subcoupling(mu, {"x": (1, 1)})
    assert dict(single.mass) == {((0,),): Fraction(1, 2), ((1,),): Fraction(1, 2)}
    with pytest.raises(CouplingError):
        subcoupling(mu, {"x": (0, 0), "y": (0, 0)})


def test_factor_coupling_reduces_z4_parallelograms_to_z2(toolkit, z2, z4):
    mu = toolkit.abelian.standard_cube_coupling(z4, 2)
    mod2 = Partition.from_labels(mu.base, lambda x: x[0] % 2)
    factored = factor_coupling(mu, mod2)
    standard = toolkit.abelian.standard_cube_coupling(z2, 2)
    assert {tuple((i,) for i in key): value for key, value in factored.items()} == dict(standard.mass)


def test_factor_by_trivial_partition_is_a_point(uniform3):
    mu = product_coupling(uniform3, ("a", "b"))
    factored = factor_coupling(mu, Partition.trivial(uniform3))
    assert dict(factored.mass) == {(0, 0): 1}


def test_relative_square_on_four_points():
    space = FiniteProbSpace.uniform([1, 2, 3, 4])
    mu = relative_square(space, Partition(space, [[1, 2], [3, 4]]))
    assert len(mu) == 8
    assert all(value == Fraction(1, 8) for value in mu.mass.values())
    assert mu.mass[(1, 2)] == Fraction(1, 8)
    assert (1, 3) not in mu.mass


def test_relative_square_extremes(uniform3):
    assert relative_square(uniform3, Partition.discrete(uniform3)).equals(diagonal_coupling(uniform3, ("a", "b")))
    assert relative_square(uniform3, Partition.trivial(uniform3)).equals(product_coupling(uniform3, ("a", "b")))


def test_index_cond_independent(z2, toolkit):
    mu = toolkit.abelian.standard_cube_coupling(z2, 2)
    assert index_cond_independent(mu, [(0, 0), (1, 0)], [(0, 0), (0, 1)])
    assert index_cond_independent(mu, [(0, 0)], [(0, 0), (1, 0)])
    assert not index_cond_independent(mu, [(0, 0)], [(1, 0), (0, 1), (1, 1)])


def test_gluing_two_products_gives_triple_product(uniform3):
    mu = product_coupling(uniform3, ("a", "b"))
    glued = glue_cond_independent(mu, mu, {"b": "b"}, rename={"a": "c"})
    assert glued.labels == ("a", "b", "c")
    assert glued.equals(product_coupling(uniform3, ("a", "b", "c")))


def test_gluing_over_nothing_is_the_product(uniform3):
    mu = diagonal_coupling(uniform3, ("a", "b"))
    glued = glue_cond_independent(mu, mu, {}, rename={"a": "c", "b": "d"})
    assert len(glued) == 9
    assert glued.mass[(1, 1, 2, 2)] == Fraction(1, 9)


def test_gluing_parallelograms_along_an_edge(z2, toolkit):
    mu = toolkit.abelian.standard_cube_coupling(z2, 2)
    rename = {(0, 1): "y01", (1, 1): "y11"}
    glued = glue_cond_independent(mu, mu, {(0, 0): (0, 0), (1, 0): (1, 0)}, rename=rename)
    assert len(glued.labels) == 6
    assert subcoupling(glued, list(mu.labels)).equals(mu)


def test_gluing_rejects_inconsistent_overlap(uniform3):
    mu = product_coupling(uniform3, ("a", "b"))
    other = diagonal_coupling(uniform3, ("a", "b"))
    with pytest.raises(CouplingError) as excinfo:
        glue_cond_independent(mu, other, {"a": "a", "b": "b"})
    assert excinfo.value.witness is not None


def test_perturbed_diagonal_coupling():
    assert is_idempotent(perturbed(Fraction(1, 4)))
    witness = idempotence_witness(perturbed(Fraction(1, 8)))
    assert witness == (0, 0)
    with pytest.raises(CouplingError):
        recover_factor(perturbed(Fraction(1, 8)))


def test_product_is_idempotent_with_trivial_factor(uniform3):
    mu = product_coupling(uniform3, ("a", "b"))
    assert is_idempotent(mu)
    assert recover_factor(mu).is_trivial()


@given(spaces_with_partitions(count=1))
def test_relative_square_round_trip(data):
    space, partition = data
    mu = relative_square(space, partition)
    assert is_idempotent(mu)
    assert recover_factor(mu) == partition
    assert relative_square(space, recover_factor(mu)).equals(mu)


@given(spaces_with_partitions(count=1))
def test_self_gluing_of_idempotent_coupling_is_symmetric(data):
    space, partition = data
    mu = relative_square(space, partition)
    nu = glue_cond_independent(mu, mu, {"b": "b"}, rename={"a": "c"})
    for image in itertools.permutations(nu.labels):
        assert subcoupling(nu, dict(zip(nu.labels, image))).equals(nu)


@given(spaces_with_partitions(count=1))
def test_idempotent_inner_product_bounds_the_mean(data):
    space, partition = data
    mu = relative_square(space, partition)
    f = FunctionOnSpace(space, [Fraction(i % 3) - 1 for i in range(len(space))])
    mean = f.mean()
    assert inner_product(mu, f, f) >= mean * mean


def test_completely_dependent(z2, toolkit, uniform3):
    assert completely_dependent(diagonal_coupling(uniform3, ("a", "b")))
    assert not completely_dependent(product_coupling(uniform3, ("a", "b")))
    cc = toolkit.standard_cubic_coupling(z2, 2)
    assert is_local(cc.measure(2), [(0, 0)])
    assert completely_dependent(cc.rooted(2, (0,)))


def test_is_isomorphic(uniform3):
    mu = relative_square(uniform3, Partition(uniform3, [[1, 2], [3]]))
    swapped = mu.relabel({"a": "b", "b": "a"})
    assert is_isomorphic(mu, subcoupling(swapped, ("a", "b")))
    assert not is_isomorphic(mu, product_coupling(uniform3, ("a", "b")))
