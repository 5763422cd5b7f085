from fractions import Fraction

import pytest

from cubecoup.core.couplings import Coupling, diagonal_coupling, product_coupling
from cubecoup.core.cube_combinatorics import vertices
from cubecoup.core.finite_measure import FiniteProbSpace, Partition
from cubecoup.exceptions import CouplingError, DimensionError
from cubecoup.services.abelian_cubes import FiniteAbelianGroup
from cubecoup.services.cubic_coupling import CubicCoupling, base_coupling
from cubecoup.services.host_kra import FilteredAction
from cubecoup.services.reports import Verdict


@pytest.fixture
def coin():
    return FiniteProbSpace.uniform([0, 1])


def sequence(space, build, n_max, name):
    return CubicCoupling(space, lambda n: build(space, vertices(n)), n_max, name=name)


def test_standard_coupling_satisfies_both_axiom_systems(toolkit, standard_z2):
    report = toolkit.verify_axioms(standard_z2)
    assert report.passed, report.failures()
    assert report.verdict_of("axiom_systems_agree") == Verdict.PASS
    assert report.verdict_of("idempotence") == Verdict.PASS


def test_standard_coupling_on_z3(toolkit, standard_z3):
    assert toolkit.cubic.verify_all(standard_z3).passed


@pytest.mark.parametrize("orders", [(3,), (4,), (2, 2)])
def test_standard_couplings_up_to_dimension_three(toolkit, orders):
    cc = toolkit.standard_cubic_coupling(FiniteAbelianGroup(orders), 3)
    report = toolkit.verify_axioms(cc)
    assert report.passed, report.failures()
    for check_id in ("consistency", "face_consistency", "ergodicity", "conditional_independence", "idempotence",
                     "axiom_systems_agree"):
        assert report.verdict_of(check_id) == Verdict.PASS


@pytest.mark.parametrize("order", [2, 3])
def test_host_kra_shift_couplings_satisfy_the_axioms(toolkit, order):
    action = FilteredAction.translation(FiniteAbelianGroup.cyclic(order), [[(1,)]])
    report = toolkit.verify_axioms(toolkit.host_kra_coupling(action, 3))
    assert report.passed, report.failures()
    assert report.verdict_of("axiom_systems_agree") == Verdict.PASS


def test_diagonal_sequence_is_not_ergodic(toolkit, coin):
    cc = sequence(coin, diagonal_coupling, 2, "diagonal")
    report = toolkit.cubic.verify_axioms_v1(cc)
    assert report.verdict_of("ergodicity") == Verdict.FAIL
    assert report.verdict_of("consistency") == Verdict.PASS
    both = toolkit.cubic.verify_all(cc)
    assert not both.passed
    assert both.verdict_of("axiom_systems_agree") == Verdict.PASS


def test_full_product_sequence_passes(toolkit, coin):
    cc = sequence(coin, product_coupling, 3, "product")
    assert toolkit.cubic.verify_all(cc).passed


def test_inconsistent_sequence_reports_first_cylinder(toolkit, z2):
    standard = toolkit.standard_cubic_coupling(z2, 2)
    space = standard.base

    def provider(n):
        if n == 1:
            return diagonal_coupling(space, vertices(1))
        return standard.measure(n)

    cc = CubicCoupling(space, provider, 2, name="broken")
    report = toolkit.cubic.verify_axioms_v1(cc)
    assert report.verdict_of("consistency") == Verdict.FAIL
    failure = report.failures()[0]
    assert failure.check_id == "consistency"
    assert failure.witness["m"] == 1
    assert failure.witness["cylinder"] is not None


def test_ergodicity_needs_dimension_one(toolkit, coin):
    cc = sequence(coin, product_coupling, 0, "point")
    report = toolkit.cubic.verify_axioms_v1(cc)
    assert report.verdict_of("ergodicity") == Verdict.NOT_APPLICABLE
    assert report.passed


def test_measure_bounds_and_labels(standard_z2, coin):
    with pytest.raises(DimensionError):
        standard_z2.measure(4)
    with pytest.raises(DimensionError):
        CubicCoupling(coin, lambda n: base_coupling(coin), -1)
    bad = CubicCoupling(coin, lambda n: product_coupling(coin, ["x"]), 1)
    with pytest.raises(CouplingError):
        bad.measure(0)


def test_measures_are_cached(standard_z2):
    assert standard_z2.measure(2) is standard_z2.measure(2)
    shorter = standard_z2.with_horizon(1)
    assert shorter.n_max == 1
    assert shorter.measure(1).equals(standard_z2.measure(1))


def test_factor_of_standard_z4_is_standard_z2(toolkit, z4, z2):
    cc = toolkit.standard_cubic_coupling(z4, 2)
    mod2 = Partition.from_labels(cc.base, lambda x: x[0] % 2)
    factored = cc.factor(mod2)
    standard = toolkit.standard_cubic_coupling(z2, 2)
    relabeled = {tuple((i,) for i in key): value for key, value in factored.measure(2).items()}
    assert relabeled == dict(standard.measure(2).mass)
    assert toolkit.cubic.verify_all(factored).passed


def test_rooted_coupling(standard_z2):
    rooted = standard_z2.rooted(2, (0,))
    assert rooted.labels == ((1, 0), (0, 1), (1, 1))
    assert len(rooted) == 4
    assert all(value == Fraction(1, 4) for value in rooted.mass.values())
    assert rooted.mass[((1,), (1,), (0,))] == Fraction(1, 4)


def test_derived_properties_of_standard_coupling(toolkit, standard_z2):
    report = toolkit.cubic.verify_derived(standard_z2)
    assert report.passed, report.failures()
    assert report.verdict_of("tricube_symmetry") == Verdict.PASS
    assert report.verdict_of("outer_point") == Verdict.PASS
    assert report.verdict_of("simplicial_cis") == Verdict.PASS


def test_derived_checks_beyond_horizon_are_not_applicable(toolkit, z3):
    cc = toolkit.standard_cubic_coupling(z3, 1)
    report = toolkit.cubic.verify_derived(cc)
    assert report.verdict_of("tricube_symmetry") == Verdict.NOT_APPLICABLE
    assert report.verdict_of("outer_point") == Verdict.NOT_APPLICABLE
    assert report.verdict_of("face_locality") == Verdict.PASS


def test_tricube_coupling_labels(toolkit, standard_z2):
    tri = toolkit.cubic.tricube_coupling(standard_z2, 1)
    assert set(tri.labels) == {(-1,), (0,), (1,)}
    assert len(tri) == 8


def test_simplicial_lattice_limit(toolkit, standard_z2):
    with pytest.raises(DimensionError):
        toolkit.cubic.verify_simplicial_cis(standard_z2, 4)


def test_aut_invariance_detects_asymmetric_measure(toolkit, uniform3):
    shift = Coupling(uniform3, vertices(1), {(1, 2): Fraction(1, 3), (2, 3): Fraction(1, 3), (3, 1): Fraction(1, 3)})
    cc = CubicCoupling(uniform3, lambda n: shift if n == 1 else base_coupling(uniform3), 1)
    result = toolkit.cubic.verify_aut_invariance(cc, 1)
    assert result.verdict == Verdict.FAIL
    assert result.witness["cylinder"] is not None
