from fractions import Fraction

import pytest

from ap_equivalence.domain.exceptions import DuplicateExponent, MixedSymbolTables, UnknownName
from ap_equivalence.domain.models.exponent import SymbolTable
from ap_equivalence.services.basis_service import (
    factorize,
    integral_basis,
    integral_basis_trace,
    lambda_zero,
    log_coordinates,
    prime_log_exponent,
    qbasis,
)


def test_qbasis_of_rationals_is_the_first_exponent(unit_table):
    exponents = [unit_table.rational("3/2"), unit_table.rational("19/6")]
    b = qbasis(exponents)
    assert b.basis_indices == (0,)
    assert b.representation.to_lists() == [[Fraction(1)], [Fraction(19, 9)]]
    for j in range(2):
        assert b.reconstruct(j) == exponents[j].coords


def test_qbasis_skips_dependent_and_zero_exponents(l2_table):
    exponents = [
        l2_table.zero(),
        l2_table.exponent([1, 0]),
        l2_table.exponent([0, 1]),
        l2_table.exponent([2, -3]),
    ]
    b = qbasis(exponents)
    assert b.basis_indices == (1, 2)
    assert b.dimension == 2
    assert b.representation.entries[0] == (0, 0)
    assert b.representation.entries[3] == (2, -3)


def test_qbasis_rejects_duplicates_and_empty(unit_table):
    with pytest.raises(DuplicateExponent) as e:
        qbasis([unit_table.rational(1), unit_table.rational(2), unit_table.rational(1)])
    assert e.value.index == 2 and e.value.first_index == 0
    with pytest.raises(ValueError):
        qbasis([])


def test_qbasis_rejects_mixed_tables(unit_table, l2_table):
    with pytest.raises(MixedSymbolTables):
        qbasis([unit_table.rational(1), l2_table.rational(2)])


def test_integral_basis_of_two_rationals(unit_table):
    module = integral_basis([unit_table.rational("3/2"), unit_table.rational("19/6")])
    assert [g.coords for g in module.basis] == [(Fraction(1, 6),)]
    assert module.representation.to_lists() == [[9], [19]]
    assert module.denominator == 6


def test_integral_basis_reconstructs_every_exponent(prime_table):
    exponents = [prime_log_exponent(prime_table, n) for n in range(2, 11)]
    module = integral_basis(exponents)
    assert module.dimension == 4
    for j, e in enumerate(exponents):
        assert module.reconstruct(j) == e.coords


def test_integral_basis_trace_follows_lambda_zero(unit_table):
    trace = integral_basis_trace(lambda_zero(unit_table), 3)
    assert [s.n for s in trace] == [1, 2, 3]
    assert [s.basis[0][0] for s in trace] == [Fraction(3, 2), Fraction(1, 6), Fraction(1, 30)]
    assert [s.denominator for s in trace] == [2, 6, 30]
    assert all(s.dimension == 1 for s in trace)


def test_integral_basis_trace_matches_direct_computation(l2_table):
    generated = [l2_table.exponent([Fraction(1, k), Fraction(k % 3, 2)]) for k in range(1, 7)]
    trace = integral_basis_trace(lambda n: generated[n - 1], 6)
    for summary in trace:
        direct = integral_basis(generated[: summary.n])
        assert summary.basis == [list(g.coords) for g in direct.basis]


def test_integral_basis_trace_rejects_repeats(unit_table):
    with pytest.raises(DuplicateExponent):
        integral_basis_trace(lambda n: unit_table.rational(1), 2)
    with pytest.raises(ValueError):
        integral_basis_trace(lambda_zero(unit_table), 0)


def test_lambda_zero_values(unit_table):
    generator = lambda_zero(unit_table)
    assert [generator(j).coords[0] for j in (1, 2, 3)] == [Fraction(3, 2), Fraction(19, 6), Fraction(51, 10)]


def test_factorize_and_log_coordinates(prime_table):
    assert factorize(360) == {2: 3, 3: 2, 5: 1}
    assert factorize(1) == {}
    assert factorize(2**61 - 1) == {2**61 - 1: 1}
    with pytest.raises(ValueError):
        factorize(0)
    assert log_coordinates(prime_table, 12) == {"L2": 2, "L3": 1}
    e = prime_log_exponent(prime_table, 6)
    assert e.coords == (0, -1, -1, 0, 0)
    assert float(e) == pytest.approx(-1.791759469228055)
    assert prime_log_exponent(prime_table, 1).is_zero()


def test_prime_log_exponent_needs_the_symbol():
    table = SymbolTable.prime_logs([2, 3])
    with pytest.raises(UnknownName):
        prime_log_exponent(table, 5)
