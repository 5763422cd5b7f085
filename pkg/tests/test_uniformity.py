import math
from fractions import Fraction
from functools import lru_cache

import pytest
from hypothesis import given, settings
from hypothesis import strategies as strat

from cubecoup import CubicToolkit, FiniteAbelianGroup, FunctionOnSpace
from cubecoup.core.cube_combinatorics import simplicial_closure, vertices
from cubecoup.exceptions import DimensionError
from cubecoup.services.abelian_cubes import Character
from cubecoup.services.reports import Verdict

TOOLKIT = CubicToolkit()
small_integers = strat.integers(min_value=-2, max_value=2)
small_values = strat.lists(small_integers, min_size=3, max_size=3)


@pytest.fixture
def standard_z4(toolkit, z4):
    return toolkit.standard_cubic_coupling(z4, 3)


@pytest.fixture
def chi(z4):
    return Character(z4, (1,)).as_function()


def test_indicator_on_z2(toolkit, standard_z2):
    f = FunctionOnSpace.indicator(standard_z2.base, [(0,)])
    assert toolkit.uniformity.u_seminorm(standard_z2, 1, f).powered == Fraction(1, 4)
    norm = toolkit.uniformity.u_seminorm(standard_z2, 2, f)
    assert norm.powered == Fraction(1, 8)
    assert math.isclose(norm.value, 8 ** -0.25)


def test_gowers_norm_facade(toolkit, z2):
    f = toolkit.abelian.function_from_list(z2, [1, 0])
    result = toolkit.gowers_norm(z2, f, 2)
    assert result["u_norm_pow"] == Fraction(1, 8)
    assert result["degree"] == 2


def test_character_norms(toolkit, standard_z4, chi):
    assert toolkit.uniformity.u_seminorm(standard_z4, 2, chi).powered == 1
    assert toolkit.uniformity.u_seminorm(standard_z4, 1, chi).is_zero


def test_missing_vertex_function_is_rejected(toolkit, standard_z2):
    f = FunctionOnSpace.constant(standard_z2.base)
    with pytest.raises(DimensionError):
        toolkit.uniformity.u_product(standard_z2, 2, {(0, 0): f})


def test_full_system_fills_constants(toolkit, standard_z2):
    f = FunctionOnSpace.indicator(standard_z2.base, [(1,)])
    system = toolkit.uniformity.full_system(standard_z2, 2, {(1, 1): f})
    assert toolkit.uniformity.u_product(standard_z2, 2, system) == Fraction(1, 2)


def test_convolution_identity(toolkit, standard_z4, chi):
    space = standard_z4.base
    system = {
        (0, 0): FunctionOnSpace(space, [1, 2, 0, -1]),
        (1, 0): chi,
        (0, 1): FunctionOnSpace(space, [0, 1, 1, 3]),
        (1, 1): chi * chi,
    }
    assert toolkit.uniformity.convolution_identity(standard_z4, 2, system)


def test_fourier_factors_of_z4(toolkit, standard_z4):
    assert toolkit.fourier_factor(standard_z4, 1).is_trivial()
    assert toolkit.fourier_factor(standard_z4, 2).is_discrete()
    assert len(toolkit.uniformity.fourier_sigma_algebra(standard_z4, 1)) == 4
    with pytest.raises(DimensionError):
        toolkit.fourier_factor(standard_z4, 0)


def test_first_fourier_factor_of_ergodic_coupling_is_trivial(toolkit, standard_z3):
    assert toolkit.fourier_factor(standard_z3, 1).is_trivial()


def test_factor_structure(toolkit, standard_z4):
    assert toolkit.uniformity.verify_factor_nesting(standard_z4, 1).verdict == Verdict.PASS
    assert toolkit.uniformity.verify_factor_meet_identity(standard_z4, 1).verdict == Verdict.PASS
    assert toolkit.uniformity.verify_factor_meet_identity(standard_z4, 2).verdict == Verdict.PASS
    factored = toolkit.uniformity.factor_cubic_coupling(standard_z4, 0)
    assert len(factored.base) == 1


def test_characteristic_factor(toolkit, standard_z4, chi):
    space = standard_z4.base
    functions = [chi, FunctionOnSpace.indicator(space, [(0,)]), FunctionOnSpace(space, [1, -1, 1, -1])]
    assert toolkit.uniformity.verify_characteristic_factor(standard_z4, 1, functions).verdict == Verdict.PASS
    assert toolkit.uniformity.verify_characteristic_factor(standard_z4, 2, functions).verdict == Verdict.PASS


def test_module_property(toolkit, standard_z4, chi):
    space = standard_z4.base
    constant = FunctionOnSpace.constant(space, 3)
    result = toolkit.uniformity.check_module_property(standard_z4, 1, chi, constant)
    assert result.verdict == Verdict.PASS
    spiky = FunctionOnSpace.indicator(space, [(2,)])
    assert toolkit.uniformity.check_module_property(standard_z4, 1, chi, spiky).verdict == Verdict.NOT_APPLICABLE
    assert toolkit.uniformity.check_module_property(standard_z4, 1, spiky, constant).verdict == Verdict.NOT_APPLICABLE


def test_zero_norm_vertex_kills_the_product(toolkit, standard_z4, chi):
    g = FunctionOnSpace(standard_z4.base, [2, 0, 1, 1])
    support = simplicial_closure([(1, 0), (0, 1)], 2)
    result = toolkit.uniformity.check_zero_norm_vanishing(standard_z4, 2, support, {(1, 0): chi, (0, 1): g})
    assert result.verdict == Verdict.PASS
    assert result.values["vertex"] == "10"


def test_simplicial_projection_and_neighbours(toolkit, standard_z4, chi):
    space = standard_z4.base
    g = FunctionOnSpace(space, [2, 0, 1, 1])
    support = simplicial_closure([(1, 0), (0, 1)], 2)
    system = {(0, 0): g, (1, 0): chi, (0, 1): g}
    assert toolkit.uniformity.verify_simplicial_projection(standard_z4, 2, support, system).verdict == Verdict.PASS

    neighbours = toolkit.uniformity.full_system(standard_z4, 2, {(0, 0): FunctionOnSpace.constant(space, 2),
                                                                  (1, 0): chi, (0, 1): g})
    result = toolkit.uniformity.verify_neighbour_vanishing(standard_z4, 1, neighbours, (0, 0), (1, 0))
    assert result.verdict == Verdict.PASS
    with pytest.raises(DimensionError):
        toolkit.uniformity.verify_neighbour_vanishing(standard_z4, 1, neighbours, (0, 0), (1, 1))


def test_factor_convolution(toolkit, standard_z4, chi):
    space = standard_z4.base
    system = {(1, 0): FunctionOnSpace(space, [1, 2, 3, 4]), (0, 1): chi, (1, 1): FunctionOnSpace(space, [0, 0, 1, 0])}
    assert toolkit.uniformity.verify_factor_convolution(standard_z4, 1, system).verdict == Verdict.PASS
    assert toolkit.uniformity.convolution_is_measurable(standard_z4, 2, 1, system).verdict == Verdict.PASS


@lru_cache(maxsize=None)
def standard(order, n_max):
    return TOOLKIT.standard_cubic_coupling(FiniteAbelianGroup.cyclic(order), n_max)


def functions_on(data, space):
    return FunctionOnSpace(space, data.draw(strat.lists(small_integers, min_size=len(space), max_size=len(space))))


@pytest.mark.parametrize("order", [2, 3])
@pytest.mark.parametrize("d", [1, 2, 3])
@settings(max_examples=10)
@given(data=strat.data())
def test_gowers_cauchy_schwarz(order, d, data):
    cc = standard(order, d)
    system = {v: functions_on(data, cc.base) for v in vertices(d)}
    assert TOOLKIT.uniformity.check_gowers_cauchy_schwarz(cc, d, system).verdict == Verdict.PASS


@pytest.mark.parametrize("order", [2, 3])
@pytest.mark.parametrize("d", [1, 2, 3])
@settings(max_examples=10)
@given(data=strat.data())
def test_seminorms_are_monotone(order, d, data):
    cc = standard(order, d + 1)
    f = functions_on(data, cc.base)
    assert TOOLKIT.uniformity.check_monotonicity(cc, d, f).verdict == Verdict.PASS


@given(small_values)
def test_zero_norm_matches_zero_projection_on_z3(values):
    cc = standard(3, 2)
    f = FunctionOnSpace(cc.base, values)
    assert TOOLKIT.uniformity.zero_norm_projection_check(cc, 1, f)
    assert TOOLKIT.uniformity.zero_norm_projection_check(cc, 2, f)


def test_degree_zero_is_rejected(toolkit, standard_z2):
    f = FunctionOnSpace(standard_z2.base, [1, -1])
    with pytest.raises(DimensionError):
        toolkit.uniformity.u_seminorm(standard_z2, 0, f)
    with pytest.raises(DimensionError):
        toolkit.gowers_norm(FiniteAbelianGroup.cyclic(2), f, 0)
    with pytest.raises(DimensionError):
        toolkit.uniformity.check_gowers_cauchy_schwarz(standard_z2, 0, {(): f})


@pytest.mark.parametrize("order", [3, 5])
def test_character_norms_stay_exact(toolkit, order):
    group = FiniteAbelianGroup.cyclic(order)
    chi = Character(group, (1,)).as_function()
    for d in (2, 3):
        powered = toolkit.gowers_norm(group, chi, d)["u_norm_pow"]
        assert powered == 1
        assert isinstance(powered, Fraction)
    assert toolkit.gowers_norm(group, chi, 1)["u_norm_pow"] == pytest.approx(0)
