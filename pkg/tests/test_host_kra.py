from fractions import Fraction

import pytest

from cubecoup.core.couplings import diagonal_coupling
from cubecoup.core.cube_combinatorics import vertices
from cubecoup.core.finite_measure import FiniteProbSpace
from cubecoup.exceptions import CouplingError, DimensionError
from cubecoup.services.abelian_cubes import Character, FiniteAbelianGroup
from cubecoup.services.host_kra import (
    FilteredAction,
    PermutationGroup,
    commutator,
    compose,
    identity_perm,
    inverse,
)
from cubecoup.services.reports import Verdict


@pytest.fixture
def z2_shift(z2):
    return FilteredAction.translation(z2, [[(1,)]])


@pytest.fixture
def z3_rotation():
    return FilteredAction(FiniteProbSpace.uniform([0, 1, 2]), [[(1, 2, 0)]], name="rotation")


@pytest.fixture
def z4_shift(z4):
    return FilteredAction.translation(z4, [[(1,)]])


def test_permutation_helpers():
    cycle = (1, 2, 0)
    assert compose(cycle, inverse(cycle)) == identity_perm(3)
    assert compose(cycle, cycle) == (2, 0, 1)
    assert commutator(cycle, (1, 0, 2)) != identity_perm(3)
    s3 = PermutationGroup(3, [(1, 0, 2), cycle])
    assert s3.order == 6
    assert s3.contains(cycle)
    assert PermutationGroup(3, []).contains(identity_perm(3))
    assert len(PermutationGroup(3, [cycle]).ball(1)) == 2
    with pytest.raises(ValueError):
        PermutationGroup(3, [(0, 0, 1)])


def test_action_must_preserve_weights():
    space = FiniteProbSpace([0, 1, 2], [Fraction(1, 2), Fraction(1, 4), Fraction(1, 4)])
    with pytest.raises(CouplingError):
        FilteredAction(space, [[(1, 0, 2)]])
    assert FilteredAction(space, [[(0, 2, 1)]]).degree == 1


def test_filtration_checks(z4):
    abelian = FilteredAction.translation(z4, [[(1,)], [(2,)]])
    assert abelian.degree == 2
    assert abelian.check_filtration().verdict == Verdict.PASS

    s3 = FilteredAction(FiniteProbSpace.uniform([0, 1, 2]), [[(1, 0, 2)], [(1, 2, 0)]])
    result = s3.check_filtration()
    assert result.verdict == Verdict.FAIL
    assert result.witness["i"] == 1


def test_generators_of_filtration(z4):
    action = FilteredAction.translation(z4, [[(1,)], [(2,)]])
    assert len(action.generators(0)) == 2
    assert action.generators(0) == action.generators(1)
    assert action.generators(2) == [(2, 3, 0, 1)]
    assert action.generators(3) == []


def test_cube_group_generators(toolkit, z2_shift, z2):
    group = toolkit.host_kra.cube_group_generators(z2_shift, 1, 1)
    assert len(group) == 1
    assert str(group.generators[0].face) == "*"
    assert group.generators[0].perm == (1, 0)
    assert len(toolkit.host_kra.cube_group_generators(z2_shift, 0, 1)) == 1
    still = FilteredAction(z2.as_space(), [])
    assert len(toolkit.host_kra.cube_group_generators(still, 2, 0)) == 0
    with pytest.raises(DimensionError):
        toolkit.host_kra.cube_group_generators(z2_shift, -1, 0)


def test_invariant_partition_of_the_shift(toolkit, z2_shift):
    cc = toolkit.host_kra_coupling(z2_shift, 2)
    group = toolkit.host_kra.cube_group_generators(z2_shift, 1, 1)
    orbits = toolkit.host_kra.invariant_partition(group, cc.measure(1))
    assert orbits.blocks() == [
        [((0,), (0,)), ((1,), (1,))],
        [((0,), (1,)), ((1,), (0,))],
    ]


def test_identity_action_gives_diagonal_measure(toolkit, z2):
    still = FilteredAction(z2.as_space(), [], name="identity")
    assert not still.is_ergodic()
    cc = toolkit.host_kra_coupling(still, 1)
    assert cc.ergodic is False
    assert cc.measure(1).equals(diagonal_coupling(still.space, vertices(1)))


def test_rotation_gives_standard_cubes(toolkit, z3_rotation, z3):
    cc = toolkit.host_kra_coupling(z3_rotation, 2)
    for n in range(3):
        assert len(cc.measure(n)) == 3 ** (n + 1)
    result = toolkit.host_kra.compare_with_standard(z3_rotation, z3, cc)
    assert result.verdict == Verdict.PASS


@pytest.mark.parametrize("order", [2, 3, 4, 5])
def test_cyclic_shifts_give_standard_cubes(toolkit, order):
    group = FiniteAbelianGroup.cyclic(order)
    action = FilteredAction.translation(group, [[(1,)]])
    cc = toolkit.host_kra_coupling(action, 3)
    result = toolkit.host_kra.compare_with_standard(action, group, cc)
    assert result.verdict == Verdict.PASS, result.witness


def test_compare_with_standard_rejects_wrong_group(toolkit, z3_rotation, z4):
    cc = toolkit.host_kra_coupling(z3_rotation, 1)
    with pytest.raises(DimensionError):
        toolkit.host_kra.compare_with_standard(z3_rotation, z4, cc)


def test_full_host_kra_report(toolkit, z3_rotation, z3):
    report = toolkit.host_kra.verify_host_kra(z3_rotation, 2, z3)
    assert report.passed, report.failures()
    for check_id in ("action_ergodic", "filtration", "consistency", "cube_group_invariance",
                     "cube_filtration", "diag_identity", "standard_cubes"):
        assert report.verdict_of(check_id) == Verdict.PASS


def test_non_ergodic_report_is_downgraded(toolkit, z2):
    still = FilteredAction(z2.as_space(), [], name="identity")
    report = toolkit.host_kra.verify_host_kra(still, 2)
    assert report.verdict_of("action_ergodic") == Verdict.NOT_APPLICABLE
    assert report.verdict_of("consistency") == Verdict.NOT_APPLICABLE
    assert report.verdict_of("cube_group_invariance") == Verdict.PASS
    assert report.passed


def test_host_kra_factors_of_z4(toolkit, z4_shift):
    assert toolkit.host_kra.hk_factor(z4_shift, 1).is_discrete()
    assert toolkit.host_kra.hk_factor(z4_shift, 0).is_trivial()


def test_host_kra_seminorm(toolkit, z4_shift, z4):
    chi = Character(z4, (1,)).as_function()
    assert toolkit.host_kra.hk_seminorm(z4_shift, 2, chi).powered == 1
    assert toolkit.host_kra.hk_seminorm(z4_shift, 1, chi).is_zero


def test_diag_identity(toolkit, z2_shift):
    for k in (0, 1):
        assert toolkit.host_kra.verify_diag_identity(z2_shift, 1, k).verdict == Verdict.PASS
