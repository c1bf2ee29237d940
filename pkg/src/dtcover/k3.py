"""
Euler-characteristic invariants J(v) on a K3 surface with Pic = Z.L.

Mukai vectors are ``(r, m, d, n)``: rank r, curve class m.c_1(L) with
L^2 = 2d - 2, and n. The invariant of a primitive vector is the Euler
characteristic of a Hilbert scheme of points,

    J(v) = chi(Hilb^{(v,v)/2 + 1}(S)),

and a general vector follows the multiple cover form

    J(v) = sum_{k | v} chi(Hilb^{(v/k, v/k)/2 + 1}(S)) / k^2,

a theorem when r = 0 and m <= 10 or m prime (see ``coverage.k3_reach``).
Euler characteristics come from Goettsche's product prod (1 - q^m)^-24.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import List, Tuple

from sympy import divisor_sigma

from .arith import divisors, format_rational, gcd_all, is_prime
from .coverage import k3_reach
from .errors import ContextError, GraphDomainError, UnsupportedError

log = logging.getLogger(__name__)

K3_EULER = 24


@dataclass(frozen=True)
class MukaiVector:
    r: int
    m: int
    d: int
    n: int

    @property
    def beta_sq(self) -> int:
        return self.m * self.m * (2 * self.d - 2)

    def divide(self, k: int) -> "MukaiVector":
        if self.r % k or self.m % k or self.n % k:
            raise GraphDomainError(f"{self} is not divisible by {k}")
        return MukaiVector(self.r // k, self.m // k, self.d, self.n // k)

    @property
    def divisibility(self) -> int:
        return gcd_all((self.r, self.m, self.n))

    def __str__(self) -> str:
        return f"({self.r}, {self.m}c1(L), {self.n}) with L^2 = {2 * self.d - 2}"


def mukai_pairing(v1: MukaiVector, v2: MukaiVector) -> int:
    """(v1, v2) = beta1.beta2 - r1 n2 - r2 n1"""
    if v1.d != v2.d:
        raise ContextError(
            f"Mukai vectors on different lattices (L^2 = {2 * v1.d - 2} vs {2 * v2.d - 2})"
        )
    return v1.m * v2.m * (2 * v1.d - 2) - v1.r * v2.n - v2.r * v1.n


@lru_cache(maxsize=None)
def _gottsche(limit: int) -> Tuple[int, ...]:
    coefficients = [1]
    for k in range(1, limit + 1):
        total = sum(
            int(divisor_sigma(j)) * coefficients[k - j] for j in range(1, k + 1)
        )
        coefficients.append(K3_EULER * total // k)
    return tuple(coefficients)


def gottsche_coeffs(D: int) -> List[int]:
    """chi(Hilb^0(S)), ..., chi(Hilb^D(S))"""
    if D < 0:
        raise GraphDomainError(f"truncation must be >= 0, got {D}")
    return list(_gottsche(D))


def hilbert_euler(index: int) -> int:
    """chi(Hilb^index(S)); 0 for a negative index (empty moduli), with a warning."""
    if index < 0:
        log.warning("Hilbert scheme index %d is negative; contributing 0", index)
        return 0
    return _gottsche(index)[index]


@dataclass(frozen=True)
class JTerm:
    k: int
    index: int
    chi: int

    @property
    def contribution(self) -> Fraction:
        return Fraction(self.chi, self.k * self.k)


@dataclass(frozen=True)
class JValue:
    vector: MukaiVector
    value: Fraction
    terms: Tuple[JTerm, ...]
    conjectural: bool

    def to_dict(self) -> dict:
        return {
            "vector": [self.vector.r, self.vector.m, self.vector.d, self.vector.n],
            "value": format_rational(self.value),
            "terms": [
                {"k": term.k, "index": term.index, "chi": term.chi} for term in self.terms
            ],
            "conjectural": self.conjectural,
        }


def j_value(v: MukaiVector) -> JValue:
    """J(v) by the divisor sum; ``conjectural`` when outside the proven reach."""
    g = v.divisibility
    if g == 0:
        raise GraphDomainError("J(0) is undefined")
    terms = []
    for k in divisors(g):
        w = v.divide(k)
        index = mukai_pairing(w, w) // 2 + 1
        terms.append(JTerm(k, index, hilbert_euler(index)))
    value = sum((term.contribution for term in terms), Fraction(0))
    conjectural = g > 1 and not (v.r == 0 and v.m > 0 and k3_reach(v.m).proven)
    return JValue(v, value, tuple(terms), conjectural)


def j_prime_case(d: int, p: int) -> Fraction:
    """J(0, p c_1(L), 0) = chi(Hilb^{(d-1)p^2+1}) + chi(Hilb^d) / p^2 for prime p."""
    if d < 1:
        raise GraphDomainError(f"d must be >= 1, got {d}")
    if not is_prime(p):
        raise UnsupportedError(f"{p} is not prime; use j_value for general multiplicities")
    return hilbert_euler((d - 1) * p * p + 1) + Fraction(hilbert_euler(d), p * p)
