import cmath
import math

import numpy as np
import pytest

from ap_equivalence.domain.exceptions import BoundaryTooClose, StripPrecondition
from ap_equivalence.domain.models.reports import Rectangle
from ap_equivalence.services.sum_service import translate
from ap_equivalence.services.value_set_service import ValueSetService
from tests.builders import exact_sum, numeric_sum


@pytest.fixture
def service():
    return ValueSetService(num_threads=2)


def test_rectangle_validation_and_helpers():
    rect = Rectangle(sigma_lo=-1, sigma_hi=1, t_lo=-3, t_hi=3)
    assert rect.area == 12
    assert rect.contains(0j) and not rect.contains(1 + 0j)
    assert rect.shifted(0.5j).t_lo == -2.5
    with pytest.raises(ValueError):
        Rectangle(sigma_lo=1, sigma_hi=1, t_lo=0, t_hi=1)


def test_attainment_count_of_exp(service, unit_table):
    f = exact_sum(unit_table, [(1, 1, 0)])
    report = service.attainment_count(f, 1.0, Rectangle(sigma_lo=-1, sigma_hi=1, t_lo=-3, t_hi=3))
    assert report.count == 1
    assert report.roots[0] == pytest.approx(0j, abs=1e-10)


def test_attainment_count_several_periods(service, unit_table):
    f = exact_sum(unit_table, [(1, 1, 0)])
    report = service.attainment_count(f, 2.0, Rectangle(sigma_lo=0, sigma_hi=1, t_lo=-1, t_hi=20))
    assert report.count == 4
    expected = [complex(math.log(2), 2 * math.pi * k) for k in range(4)]
    assert report.roots == pytest.approx(expected, abs=1e-9)


def test_attainment_count_of_a_quadratic_in_exp(service, unit_table):
    # e^(2s) - 1 = 0 at s = i pi k
    f = exact_sum(unit_table, [(2, 1, 0)])
    report = service.attainment_count(f, 1.0, Rectangle(sigma_lo=-0.5, sigma_hi=0.5, t_lo=-1, t_hi=7))
    assert report.count == 3
    assert [r.imag for r in report.roots] == pytest.approx([0, math.pi, 2 * math.pi], abs=1e-9)


def test_attainment_count_no_solution(service, unit_table):
    f = exact_sum(unit_table, [(1, 1, 0)])
    report = service.attainment_count(f, 10.0, Rectangle(sigma_lo=-1, sigma_hi=1, t_lo=-3, t_hi=3))
    assert report.count == 0 and report.roots == []


def test_attainment_count_refuses_constants(service, unit_table):
    with pytest.raises(ValueError):
        service.attainment_count(exact_sum(unit_table, [(0, 1, 0)]), 1.0, Rectangle(sigma_lo=0, sigma_hi=1, t_lo=0, t_hi=1))


def test_boundary_through_a_root(service, unit_table):
    f = exact_sum(unit_table, [(1, 1, 0)])
    with pytest.raises(BoundaryTooClose) as e:
        service.attainment_count(f, 1.0, Rectangle(sigma_lo=0, sigma_hi=1, t_lo=-1, t_hi=1))
    assert e.value.margin < 1e-9
    assert e.value.suggested_offset != 0


def test_excluded_by_modulus(service, unit_table):
    f = exact_sum(unit_table, [(1, 1, 0)])
    assert service.excluded(f, 10.0, (-1.0, 1.0))
    assert service.excluded(f, 0.1, (-1.0, 1.0))
    assert not service.excluded(f, 1.0, (-1.0, 1.0))
    result = service.attains(f, 10.0, (-1.0, 1.0))
    assert result.status == "excluded"


def test_attains_finds_far_values(service, unit_table):
    f = exact_sum(unit_table, [(1, 1, 0), (2, 1, 0)])
    target = complex(cmath.exp(complex(0.2, 1.0)) + cmath.exp(complex(0.4, 2.0)))
    result = service.attains(f, target, (0.0, 0.5), t_cap=64, tol=1e-8)
    assert result.status == "found"
    assert result.residual <= 1e-8
    assert 0.0 <= result.point.real <= 0.5


def test_attains_constant_sum(service, unit_table):
    constant = exact_sum(unit_table, [(0, 2, 0)])
    assert service.attains(constant, 2.0, (0.0, 1.0)).status == "found"
    assert service.attains(constant, 3.0, (0.0, 1.0)).status == "excluded"


def test_attains_unresolved_is_not_excluded(service, corpus):
    # i x + x^2 = w has roots x = 0.8 and x = -0.8 - i, both off the annulus e^-0.1 <= |x| <= e^0.1
    result = service.attains(corpus.get("Q"), complex(0.64, 0.8), (-0.1, 0.1), t_cap=16, tol=1e-6)
    assert result.status == "unresolved"
    assert result.explored_t == 16
    assert result.point is None


def test_sample_points_are_reproducible(service):
    a = service.sample_points((0.0, 1.0), 5, 7)
    b = service.sample_points((0.0, 1.0), 5, 7)
    assert np.array_equal(a, b)
    assert np.all((a.real >= 0) & (a.real <= 1))
    assert np.all(np.abs(a.imag) <= 100)


def test_equivalent_pair_has_equal_value_sets(service, corpus):
    comparison = service.value_set_compare(corpus.get("P"), corpus.get("H"), (-0.2, 0.2), n_samples=4, seed=1, t_cap=64)
    assert comparison.fraction_f1_attains_f2 == 1.0
    assert comparison.fraction_f2_attains_f1 == 1.0
    assert comparison.complete
    assert len(comparison.outcomes) == 8
    assert len(comparison.worst) <= 3


def test_inequivalent_pair_misses_values(service, corpus):
    comparison = service.value_set_compare(corpus.get("P"), corpus.get("Q"), (-0.1, 0.1), n_samples=8, seed=3, t_cap=32)
    assert min(comparison.fraction_f1_attains_f2, comparison.fraction_f2_attains_f1) < 1.0
    assert not comparison.complete
    assert any(o.status == "unresolved" for o in comparison.outcomes)


def test_different_moduli_are_excluded_both_ways(service, corpus):
    comparison = service.value_set_compare(corpus.get("M2"), corpus.get("M1"), (0.9, 1.1), n_samples=5, seed=0)
    assert comparison.fraction_f1_attains_f2 == 0.0
    assert comparison.fraction_f2_attains_f1 == 0.0
    assert all(o.status == "excluded" for o in comparison.outcomes)


def test_value_set_compare_preconditions(service, unit_table, corpus):
    with pytest.raises(StripPrecondition):
        service.value_set_compare(corpus.get("P"), corpus.get("H"), (0.5, 0.5))
    with pytest.raises(ValueError):
        service.value_set_compare(corpus.get("P"), corpus.get("H"), (0.0, 0.5), n_samples=0)


def test_substrips_overlap():
    pieces = ValueSetService.substrips((0.0, 3.0), 3)
    assert pieces[0] == pytest.approx((0.0, 1.125))
    assert pieces[1] == pytest.approx((0.875, 2.125))
    assert pieces[2] == pytest.approx((1.875, 3.0))


def test_experiment_cross_checks_the_exact_verdict(service, corpus):
    report = service.equivalence_principle_experiment(
        corpus.get("P"), corpus.get("H"), (-0.3, 0.3), n_substrips=2, n_samples=3, seed=5, t_cap=64
    )
    assert report.n_substrips == 2
    assert report.consistent_with_equivalence
    assert report.exact_verdict is True
    assert report.agrees_with_exact is True


def test_experiment_on_numeric_sums_has_no_exact_verdict(service, unit_table):
    g1 = numeric_sum(unit_table, [(1, 1.0)], "g1")
    g2 = numeric_sum(unit_table, [(1, 1j)], "g2")
    report = service.equivalence_principle_experiment(g1, g2, (-0.5, 0.5), n_substrips=1, n_samples=2, seed=0, t_cap=32)
    assert report.exact_verdict is None
    assert report.agrees_with_exact is None
    assert report.consistent_with_equivalence


def _ordered(roots):
    return sorted(roots, key=lambda r: (round(r.imag, 6), round(r.real, 6)))


def _quadratic_in_exp(unit_table):
    # e^(2s)/2 + e^s = 4 at e^s = 2 and e^s = -4
    return exact_sum(unit_table, [(1, 1, 0), (2, "1/2", 0)])


def test_attainment_count_adds_over_a_partition(service, unit_table):
    f = _quadratic_in_exp(unit_table)
    whole = service.attainment_count(f, 4.0, Rectangle(sigma_lo=0, sigma_hi=2, t_lo=-1, t_hi=20))
    assert whole.count == 7
    sigma_cuts, t_cuts = [0, 1, 2], [-1, 4.5, 11, 20]
    pieces = [
        service.attainment_count(f, 4.0, Rectangle(sigma_lo=s0, sigma_hi=s1, t_lo=t0, t_hi=t1))
        for s0, s1 in zip(sigma_cuts, sigma_cuts[1:])
        for t0, t1 in zip(t_cuts, t_cuts[1:])
    ]
    assert sum(p.count for p in pieces) == whole.count
    assert _ordered([r for p in pieces for r in p.roots]) == pytest.approx(_ordered(whole.roots), abs=1e-8)


def test_attainment_count_follows_translation(service, unit_table):
    f = _quadratic_in_exp(unit_table)
    rect = Rectangle(sigma_lo=0, sigma_hi=2, t_lo=-1, t_hi=20)
    for tau in (1.3, -2.0, 40.0):
        shifted = service.attainment_count(f, 4.0, rect.shifted(complex(0, tau)))
        moved = service.attainment_count(translate(f, tau), 4.0, rect)
        assert moved.count == shifted.count
        assert _ordered([r + 1j * tau for r in moved.roots]) == pytest.approx(_ordered(shifted.roots), abs=1e-8)


def test_value_set_comparison_is_reproducible(unit_table, corpus):
    runs = [
        ValueSetService(num_threads=2).value_set_compare(
            corpus.get("P"), corpus.get("Q"), (-0.1, 0.1), n_samples=4, seed=11, t_cap=32
        )
        for _ in range(2)
    ]
    assert runs[1].model_dump() == runs[0].model_dump()
    other = ValueSetService(num_threads=2).value_set_compare(
        corpus.get("P"), corpus.get("Q"), (-0.1, 0.1), n_samples=4, seed=12, t_cap=32
    )
    assert [o.target for o in other.outcomes] != [o.target for o in runs[0].outcomes]
