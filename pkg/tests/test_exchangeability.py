import csv
from fractions import Fraction

import numpy as np
import pytest

from cubecoup.exceptions import DimensionError, SampleSizeError
from cubecoup.services.abelian_cubes import Character, FiniteAbelianGroup
from cubecoup.services.exchangeability import KernelMap, Pattern, independent_face_pairs
from cubecoup.services.reports import Verdict


@pytest.fixture
def delta(z2):
    return KernelMap.point_mass(z2)


@pytest.fixture
def zero_kernel(z2):
    return KernelMap.constant(z2, (0,), alphabet=z2.elements())


@pytest.fixture
def skewed_kernel(z3):
    return KernelMap(z3, ["a", "b", "c"], {
        (0,): {"a": Fraction(1, 2), "b": Fraction(1, 4), "c": Fraction(1, 4)},
        (1,): {"b": Fraction(1, 2), "c": Fraction(1, 2)},
        (2,): {"a": Fraction(1, 3), "b": Fraction(1, 3), "c": Fraction(1, 3)},
    })


def test_pattern_normalizes_vertices():
    pattern = Pattern.gowers(2)
    assert pattern.plain == ((0, 0), (1, 1))
    assert pattern.conjugated == ((0, 1), (1, 0))
    assert str(Pattern(1, ((1,), (0,)))) == "k=1 S1={0,1} S2={}"
    with pytest.raises(DimensionError):
        Pattern(1, ((0, 1),))


def test_density_of_an_edge(toolkit, z2):
    f = toolkit.abelian.function_from_list(z2, [1, 0])
    assert toolkit.pattern_density(z2, f, Pattern(1, ((0,),), ((1,),))) == Fraction(1, 4)
    assert toolkit.pattern_density(z2, f, Pattern(0, ((), ()))) == Fraction(1, 2)


@pytest.mark.parametrize("k", [1, 2])
def test_gowers_pattern_density_is_the_powered_norm(toolkit, z4, k):
    chi = Character(z4, (1,)).as_function()
    f = chi + toolkit.abelian.function_from_list(z4, [2, 0, 1, 0])
    density = toolkit.pattern_density(z4, f, Pattern.gowers(k))
    cc = toolkit.standard_cubic_coupling(z4, k)
    assert density == toolkit.uniformity.u_seminorm(cc, k, f).powered


def test_cubic_convergence_of_shrinking_indicators(toolkit):
    sequence = []
    for i in range(1, 5):
        group = FiniteAbelianGroup.cyclic(2 ** i)
        sequence.append((group, toolkit.abelian.function_from_values(group, {(0,): 1})))
    report = toolkit.exchange.is_cubic_convergent(sequence, [Pattern.gowers(1)], eps=0.02)
    check = report.checks[0]
    assert check.verdict == Verdict.PASS
    assert check.values["densities"] == [Fraction(1, 4 ** i) for i in range(1, 5)]
    assert check.values["decreasing"]
    assert check.values["last_gap"] == pytest.approx(3 / 256)
    strict = toolkit.exchange.is_cubic_convergent(sequence, [Pattern.gowers(1)])
    assert not strict.passed


def test_kernel_validation(z2):
    with pytest.raises(ValueError):
        KernelMap(z2, ["a", "b"], {(0,): {"a": Fraction(1, 2)}, (1,): {"b": 1}})
    with pytest.raises(DimensionError):
        KernelMap(z2, ["a"], {(0,): {"a": 1}})
    with pytest.raises(ValueError):
        KernelMap(z2, ["a"], {(0,): {"a": 1}, (1,): {"c": 1}})
    uniform = KernelMap.uniform(z2, ["a", "b"])
    assert uniform.marginal() == [Fraction(1, 2), Fraction(1, 2)]


def test_independent_face_pairs():
    assert len(independent_face_pairs(1)) == 1
    assert len(independent_face_pairs(2)) == 14


def test_point_mass_law_is_the_standard_coupling(toolkit, delta, z2):
    law = toolkit.exchange.exact_window_law(delta, 2)
    assert law.equals(toolkit.abelian.standard_cube_coupling(z2, 2))
    assert toolkit.exchange.verify_exact(law).passed


def test_corrupted_law_fails_both_checks(toolkit, delta):
    law = toolkit.exchange.exact_window_law(delta, 2, corrupted=True)
    report = toolkit.exchange.verify_exact(law)
    assert report.verdict_of("exact_consistency") == Verdict.FAIL
    assert report.verdict_of("exact_face_independence") == Verdict.FAIL


def test_mixture_is_consistent_but_not_face_independent(toolkit, delta, zero_kernel):
    law = toolkit.exchange.mixture_law(toolkit.exchange.exact_window_law(delta, 2),
                                       toolkit.exchange.exact_window_law(zero_kernel, 2))
    zero = (0,)
    assert law.project([(0, 0), (1, 1)])[(zero, zero)] == Fraction(5, 8)
    assert law.marginal((0, 0))[zero] ** 2 == Fraction(9, 16)
    report = toolkit.exchange.verify_exact(law)
    assert report.verdict_of("exact_consistency") == Verdict.PASS
    assert report.verdict_of("exact_face_independence") == Verdict.FAIL
    with pytest.raises(ValueError):
        toolkit.exchange.mixture_law(law, law, Fraction(3, 2))


def test_window_dimension_limits(toolkit, delta):
    with pytest.raises(DimensionError):
        toolkit.exchange.exact_window_law(delta, 5)
    with pytest.raises(DimensionError):
        toolkit.sample_zeta(delta, -1, 10)


def test_sampler_passes_the_exchangeability_tests(toolkit, delta):
    batch = toolkit.sample_zeta(delta, 2, 20000, seed=7)
    assert batch.samples.shape == (20000, 4)
    assert batch.sampler == "zeta"
    report = toolkit.test_exchangeable(batch)
    assert report.passed, report.failures()


def test_corrupted_sampler_fails_face_independence(toolkit, delta):
    batch = toolkit.exchange.corrupted_sampler(delta, 2, 20000, seed=7)
    assert batch.sampler == "corrupted"
    report = toolkit.test_exchangeable(batch)
    assert report.verdict_of("face_independence_chi2") == Verdict.FAIL
    assert report.verdict_of("consistency_tv") == Verdict.FAIL


def test_random_kernel_passes_exact_and_sampled_tests(toolkit, skewed_kernel):
    batch = toolkit.sample_zeta(skewed_kernel, 2, 100000, seed=0)
    assert batch.alphabet == ("a", "b", "c")
    report = toolkit.test_exchangeable(batch)
    assert report.passed, report.failures()
    assert report.verdict_of("consistency_tv") == Verdict.PASS
    assert report.verdict_of("face_independence_chi2") == Verdict.PASS
    exact = toolkit.exchange.verify_exact(toolkit.exchange.exact_window_law(skewed_kernel, 2))
    assert exact.passed, exact.failures()


def test_corrupted_sampler_on_random_kernel(toolkit, skewed_kernel):
    batch = toolkit.exchange.corrupted_sampler(skewed_kernel, 2, 100000, seed=0)
    report = toolkit.test_exchangeable(batch)
    assert report.verdict_of("consistency_tv") == Verdict.FAIL
    assert report.verdict_of("face_independence_chi2") == Verdict.FAIL
    law = toolkit.exchange.exact_window_law(skewed_kernel, 2, corrupted=True)
    assert toolkit.exchange.verify_exact(law).verdict_of("exact_face_independence") == Verdict.FAIL


def test_samples_do_not_depend_on_thread_count(toolkit, delta):
    single = toolkit.sample_zeta(delta, 2, 25000, seed=3, workers=1)
    pooled = toolkit.sample_zeta(delta, 2, 25000, seed=3, workers=4)
    assert np.array_equal(single.samples, pooled.samples)
    other = toolkit.sample_zeta(delta, 2, 25000, seed=4, workers=1)
    assert not np.array_equal(single.samples, other.samples)


def test_small_batches_are_rejected(toolkit, delta):
    batch = toolkit.sample_zeta(delta, 2, 100, seed=1)
    with pytest.raises(SampleSizeError) as excinfo:
        toolkit.exchange.test_consistency(batch)
    assert excinfo.value.required == 320
    empty = toolkit.sample_zeta(delta, 1, 0)
    assert empty.samples.shape == (0, 2)


def test_face_independence_needs_two_faces(toolkit, delta):
    batch = toolkit.sample_zeta(delta, 0, 50, seed=1)
    assert toolkit.exchange.test_face_independence(batch).verdict == Verdict.NOT_APPLICABLE


def test_batch_csv(toolkit, delta, tmp_path):
    batch = toolkit.sample_zeta(delta, 1, 5, seed=2)
    path = tmp_path / "out" / "samples.csv"
    assert toolkit.exchange.write_batch_csv(batch, path) == 10
    with open(path, newline='', encoding='utf-8') as f:
        rows = list(csv.reader(f))
    assert rows[0] == ["sample_id", "vertex_bits", "symbol"]
    assert len(rows) == 11
    assert [row[1] for row in rows[1:3]] == ["0", "1"]
    assert {row[2] for row in rows[1:]} <= {"0", "1"}
