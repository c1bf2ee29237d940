"""
Tests for the series.py module: truncated series, log/exp and the product side.
"""

# mypy: ignore-errors

import random
from fractions import Fraction

import pytest

from dtcover.errors import ContextError, SeriesDomainError
from dtcover.graph import CurveClass
from dtcover.invariants import GvTable
from dtcover.series import (
    FormalSeries,
    gv_product_side,
    series_exp,
    series_log,
    series_mul,
    series_power,
    slope_degree,
)

TRUNCATION = 3
N_BOUND = 6


def _random_series(graph, rng, constant, truncation=TRUNCATION, density=0.6):
    # n stays within [-2, 2] per term, so 2 * truncation bounds every product
    terms = {(0, CurveClass.zero()): constant}
    for gamma in graph.classes_up_to(truncation):
        if rng.random() < density:
            n = rng.randint(-2, 2)
            terms[(n, gamma)] = Fraction(rng.randint(-5, 5), rng.randint(1, 4))
    return FormalSeries(graph, truncation, max(N_BOUND, 2 * truncation), terms)


class TestFormalSeries:
    """Tests for construction and the ring operations."""

    def test_truncation_drops_terms(self, i1) -> None:
        """
        Scenario: Terms beyond the degree or n bound

        Expected:
        - They are silently dropped, zero coefficients too
        """
        c = CurveClass({"c1": 1})
        s = FormalSeries(
            i1,
            2,
            1,
            {(0, c): 1, (0, c.scale(3)): 5, (2, c): 7, (1, c.scale(2)): 0},
        )
        assert s.terms == {(0, c): Fraction(1)}

    def test_constant_only_at_zero_class(self, i1) -> None:
        with pytest.raises(SeriesDomainError):
            FormalSeries(i1, 2, 2, {(1, CurveClass.zero()): 1})

    def test_bad_bounds(self, i1) -> None:
        with pytest.raises(SeriesDomainError):
            FormalSeries(i1, 0, 2)

    def test_mismatched_contexts(self, i1, i2) -> None:
        """
        Scenario: Adding series on different graphs or truncations

        Expected:
        - ContextError
        """
        with pytest.raises(ContextError):
            FormalSeries.one(i1, 2, 2) + FormalSeries.one(i2, 2, 2)
        with pytest.raises(ContextError):
            FormalSeries.one(i1, 2, 2) * FormalSeries.one(i1, 3, 2)

    def test_product_truncates(self, i1) -> None:
        """
        Scenario: (1 + t)^2 truncated at degree 1

        Expected:
        - 1 + 2t, the t^2 term is dropped
        """
        c = CurveClass({"c1": 1})
        s = FormalSeries.one(i1, 1, 2) + FormalSeries.monomial(i1, 1, 2, 0, c)
        assert series_mul(s, s) == s + FormalSeries.monomial(i1, 1, 2, 0, c)

    @pytest.mark.parametrize("seed", range(10))
    def test_product_is_associative_and_commutative(self, i2, seed) -> None:
        """
        Scenario: Truncated products of three random series on I_2

        Expected:
        - (a b) c = a (b c) and a b = b a
        """
        rng = random.Random(seed)
        a, b, c = (_random_series(i2, rng, rng.randint(-2, 2)) for _ in range(3))
        assert series_mul(series_mul(a, b), c) == series_mul(a, series_mul(b, c))
        assert series_mul(a, b) == series_mul(b, a)

    def test_items_are_canonical(self, i2) -> None:
        s = FormalSeries(
            i2,
            3,
            3,
            {
                (1, CurveClass({"c1": 2})): 1,
                (0, CurveClass({"c2": 1})): 2,
                (-1, CurveClass({"c1": 1})): 3,
            },
        )
        assert [index for index, _ in s.items()] == [
            (-1, CurveClass({"c1": 1})),
            (0, CurveClass({"c2": 1})),
            (1, CurveClass({"c1": 2})),
        ]


class TestLogExp:
    """Tests for series_log and series_exp."""

    def test_log_of_one_plus_t(self, i1) -> None:
        """
        Scenario: log(1 + t) truncated at degree 3

        Expected:
        - t - t^2/2 + t^3/3
        """
        c = CurveClass({"c1": 1})
        s = FormalSeries.one(i1, 3, 2) + FormalSeries.monomial(i1, 3, 2, 0, c)
        assert series_log(s).terms == {
            (0, c): Fraction(1),
            (0, c.scale(2)): Fraction(-1, 2),
            (0, c.scale(3)): Fraction(1, 3),
        }

    def test_log_domain(self, i1) -> None:
        with pytest.raises(SeriesDomainError, match="constant term 1"):
            series_log(FormalSeries.zero(i1, 2, 2))

    def test_exp_domain(self, i1) -> None:
        with pytest.raises(SeriesDomainError, match="constant term 0"):
            series_exp(FormalSeries.one(i1, 2, 2))

    @pytest.mark.parametrize("seed", range(5))
    def test_round_trips(self, i2, seed) -> None:
        """
        Scenario: Random series with seeded rational coefficients

        Expected:
        - exp(log s) = s for constant term 1
        - log(exp s) = s for constant term 0
        - log(a b) = log a + log b
        """
        rng = random.Random(seed)
        unit = _random_series(i2, rng, 1)
        nilpotent = _random_series(i2, rng, 0)
        other = _random_series(i2, rng, 1)
        assert series_exp(series_log(unit)) == unit
        assert series_log(series_exp(nilpotent)) == nilpotent
        assert series_log(unit * other) == series_log(unit) + series_log(other)

    @pytest.mark.parametrize("seed", range(100))
    def test_sparse_round_trips(self, i1, seed) -> None:
        """
        Scenario: Sparse random series on I_1 truncated at a random degree from 1 to 8

        Expected:
        - exp and log invert each other on their domains
        """
        rng = random.Random(1000 + seed)
        truncation = rng.randint(1, 8)
        unit = _random_series(i1, rng, 1, truncation, density=0.35)
        nilpotent = _random_series(i1, rng, 0, truncation, density=0.35)
        assert series_exp(series_log(unit)) == unit
        assert series_log(series_exp(nilpotent)) == nilpotent

    def test_rational_power(self, i1) -> None:
        """
        Scenario: Square root of (1 + t)^2

        Expected:
        - 1 + t
        """
        c = CurveClass({"c1": 1})
        s = FormalSeries.one(i1, 3, 2) + FormalSeries.monomial(i1, 3, 2, 0, c)
        assert series_power(s * s, Fraction(1, 2)) == s


class TestProductSide:
    """Tests for gv_product_side and slope_degree."""

    def test_slope_degree(self, i2) -> None:
        gamma = CurveClass({"c1": 1, "c2": 1})
        assert slope_degree(i2, gamma, Fraction(1, 2)) == 1
        assert slope_degree(i2, gamma, Fraction(1, 3)) is None

    def test_single_factor(self, i1) -> None:
        """
        Scenario: Product side of I_1 at slope 0, truncated at degree 2

        Expected:
        - (1 + t)(1 - t^2)^2 = 1 + t - 2t^2 up to degree 2
        """
        c = CurveClass({"c1": 1})
        table = GvTable.from_values({c: 1, c.scale(2): 1}, i1)
        side = gv_product_side(table, i1, slope=0, truncation=2, n_bound=2)
        assert side.terms == {
            (0, CurveClass.zero()): Fraction(1),
            (0, c): Fraction(1),
            (0, c.scale(2)): Fraction(-2),
        }

    def test_explicit_support(self, i1) -> None:
        c = CurveClass({"c1": 1})
        table = GvTable.from_values({c: 1}, i1)
        side = gv_product_side(table, i1, support=[(1, c)], truncation=2, n_bound=2)
        assert side.coefficient(1, c) == 1
        assert side.coefficient(2, c.scale(2)) == 0

    def test_exactly_one_factor_set(self, i1) -> None:
        table = GvTable(i1)
        with pytest.raises(SeriesDomainError):
            gv_product_side(table, i1)
        with pytest.raises(SeriesDomainError):
            gv_product_side(table, i1, slope=0, support=[])
