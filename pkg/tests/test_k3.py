"""
Tests for the k3.py module: Goettsche numbers and J(v).
"""

# mypy: ignore-errors

import logging
from fractions import Fraction

import pytest

from dtcover.errors import ContextError, GraphDomainError, UnsupportedError
from dtcover.k3 import (
    MukaiVector,
    gottsche_coeffs,
    hilbert_euler,
    j_prime_case,
    j_value,
    mukai_pairing,
)


def _naive_product(limit):
    """Coefficients of prod_{m >= 1} (1 - q^m)^-24 by repeated geometric series."""
    coefficients = [1] + [0] * limit
    for m in range(1, limit + 1):
        for _ in range(24):
            for k in range(m, limit + 1):
                coefficients[k] += coefficients[k - m]
    return coefficients


class TestGottsche:
    """Tests for the Euler characteristics of Hilbert schemes of a K3."""

    def test_known_prefix(self) -> None:
        assert gottsche_coeffs(5) == [1, 24, 324, 3200, 25650, 176256]

    def test_against_naive_product(self) -> None:
        """
        Scenario: The recurrence against a direct expansion of the product

        Expected:
        - Identical coefficients up to degree 12
        """
        assert gottsche_coeffs(12) == _naive_product(12)

    def test_negative_truncation(self) -> None:
        with pytest.raises(GraphDomainError):
            gottsche_coeffs(-1)

    def test_negative_index_warns(self, caplog) -> None:
        """
        Scenario: A Hilbert scheme of a negative number of points

        Expected:
        - Contributes 0 and logs a warning
        """
        with caplog.at_level(logging.WARNING, logger="dtcover.k3"):
            assert hilbert_euler(-1) == 0
        assert "negative" in caplog.text


class TestMukai:
    def test_pairing(self) -> None:
        v = MukaiVector(1, 2, 3, 5)
        w = MukaiVector(2, 1, 3, -1)
        assert v.beta_sq == 16
        assert mukai_pairing(v, w) == 2 * 4 - 1 * (-1) - 2 * 5

    def test_different_lattices(self) -> None:
        with pytest.raises(ContextError):
            mukai_pairing(MukaiVector(0, 1, 2, 0), MukaiVector(0, 1, 3, 0))

    def test_divide(self) -> None:
        v = MukaiVector(0, 4, 2, 2)
        assert v.divisibility == 2
        assert v.divide(2) == MukaiVector(0, 2, 2, 1)
        with pytest.raises(GraphDomainError):
            v.divide(4)


class TestJValue:
    """Tests for j_value and j_prime_case."""

    def test_prime_case_value(self) -> None:
        """
        Scenario: J(0, 2 c_1(L), 0) with L^2 = 2

        Expected:
        - chi(Hilb^5) + chi(Hilb^2) / 4 = 176256 + 81
        """
        assert j_prime_case(2, 2) == 176337

    @pytest.mark.parametrize("d", [1, 2, 3, 4])
    @pytest.mark.parametrize("p", [2, 3])
    def test_prime_case_matches_divisor_sum(self, d, p) -> None:
        result = j_value(MukaiVector(0, p, d, 0))
        assert result.value == j_prime_case(d, p)
        assert not result.conjectural

    def test_primitive_vector(self) -> None:
        result = j_value(MukaiVector(0, 1, 2, 0))
        assert result.value == 324
        assert [term.index for term in result.terms] == [2]

    def test_genus_one_fibre_class(self) -> None:
        """
        Scenario: L^2 = 0 and m = 2, every term sits on Hilb^1

        Expected:
        - 24 (1 + 1/4) = 30
        """
        assert j_value(MukaiVector(0, 2, 1, 0)).value == Fraction(30)

    def test_conjectural_range(self) -> None:
        assert j_value(MukaiVector(0, 12, 1, 0)).conjectural
        assert not j_value(MukaiVector(0, 11, 1, 0)).conjectural
        assert j_value(MukaiVector(2, 0, 2, 2)).conjectural

    def test_zero_vector(self) -> None:
        with pytest.raises(GraphDomainError):
            j_value(MukaiVector(0, 0, 2, 0))

    def test_prime_case_domain(self) -> None:
        with pytest.raises(UnsupportedError):
            j_prime_case(2, 4)
        with pytest.raises(GraphDomainError):
            j_prime_case(0, 2)

    def test_to_dict(self) -> None:
        payload = j_value(MukaiVector(0, 2, 2, 0)).to_dict()
        assert payload["value"] == "176337"
        assert payload["vector"] == [0, 2, 2, 0]
        assert [term["k"] for term in payload["terms"]] == [1, 2]
