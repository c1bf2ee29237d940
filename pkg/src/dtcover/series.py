"""
Truncated formal power series in ``q^n t^gamma`` with exact coefficients.

A ``FormalSeries`` lives on a fixed dual graph (the ``context``) and keeps
only terms with ``d(gamma) <= truncation`` and ``|n| <= n_bound``; every
identity in the engine holds "up to truncation" in this sense. The only
term allowed to have ``gamma = 0`` is the constant term ``q^0 t^0``.

Because every non-constant term has positive degree, ``(s - 1)^l`` vanishes
beyond ``l = truncation``, so log and exp are finite sums here.

Example:
    >>> from dtcover.families import cycle_graph
    >>> g = cycle_graph(1)
    >>> c = CurveClass({"c1": 1})
    >>> s = FormalSeries.one(g, 4, 6) + FormalSeries.monomial(g, 4, 6, 1, c)
    >>> series_exp(series_log(s)) == s
    True
"""

import logging
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Protocol, Tuple, Union

from .arith import sign
from .errors import ContextError, SeriesDomainError
from .graph import CurveClass, DualGraph

log = logging.getLogger(__name__)

TermIndex = Tuple[int, CurveClass]
Number = Union[int, Fraction]

_ZERO = CurveClass.zero()


class FormalSeries:
    """Immutable truncated series ``sum c_{n,gamma} q^n t^gamma``."""

    __slots__ = ("context", "truncation", "n_bound", "_terms")

    def __init__(
        self,
        context: DualGraph,
        truncation: int,
        n_bound: int,
        terms: Optional[Mapping[TermIndex, Number]] = None,
    ):
        if truncation < 1 or n_bound < 1:
            raise SeriesDomainError(
                f"truncation and n_bound must be positive, got {truncation}, {n_bound}"
            )
        self.context = context
        self.truncation = truncation
        self.n_bound = n_bound
        kept: Dict[TermIndex, Fraction] = {}
        for (n, gamma), coefficient in (terms or {}).items():
            value = Fraction(coefficient)
            if value == 0:
                continue
            if gamma.is_zero() and n != 0:
                raise SeriesDomainError(f"term q^{n} t^0 is not allowed")
            if gamma.degree > truncation or abs(n) > n_bound:
                continue
            kept[(n, gamma)] = value
        self._terms = kept

    @classmethod
    def zero(cls, context: DualGraph, truncation: int, n_bound: int) -> "FormalSeries":
        return cls(context, truncation, n_bound)

    @classmethod
    def one(cls, context: DualGraph, truncation: int, n_bound: int) -> "FormalSeries":
        return cls(context, truncation, n_bound, {(0, _ZERO): 1})

    @classmethod
    def monomial(
        cls,
        context: DualGraph,
        truncation: int,
        n_bound: int,
        n: int,
        gamma: CurveClass,
        coefficient: Number = 1,
    ) -> "FormalSeries":
        context.check_class(gamma)
        return cls(context, truncation, n_bound, {(n, gamma): coefficient})

    def like(self, terms: Mapping[TermIndex, Number]) -> "FormalSeries":
        """A series with the same context and truncation."""
        return FormalSeries(self.context, self.truncation, self.n_bound, terms)

    @property
    def terms(self) -> Dict[TermIndex, Fraction]:
        return dict(self._terms)

    def items(self) -> List[Tuple[TermIndex, Fraction]]:
        """Terms in canonical order (by degree, class, then n)."""
        return sorted(
            self._terms.items(), key=lambda item: (item[0][1].sort_key(), item[0][0])
        )

    def coefficient(self, n: int, gamma: CurveClass) -> Fraction:
        return self._terms.get((n, gamma), Fraction(0))

    @property
    def constant_term(self) -> Fraction:
        return self.coefficient(0, _ZERO)

    def is_zero(self) -> bool:
        return not self._terms

    def _check_compatible(self, other: "FormalSeries") -> None:
        if (
            self.context != other.context
            or self.truncation != other.truncation
            or self.n_bound != other.n_bound
        ):
            raise ContextError(
                "series live on different contexts or truncations "
                f"(D={self.truncation}/{other.truncation}, "
                f"n_bound={self.n_bound}/{other.n_bound})"
            )

    def __add__(self, other: "FormalSeries") -> "FormalSeries":
        self._check_compatible(other)
        summed = dict(self._terms)
        for index, value in other._terms.items():
            summed[index] = summed.get(index, Fraction(0)) + value
        return self.like(summed)

    def __sub__(self, other: "FormalSeries") -> "FormalSeries":
        return self + other.scale(-1)

    def scale(self, factor: Number) -> "FormalSeries":
        return self.like({index: value * factor for index, value in self._terms.items()})

    def __mul__(self, other: "FormalSeries") -> "FormalSeries":
        return series_mul(self, other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FormalSeries):
            return NotImplemented
        return (
            self.context == other.context
            and self.truncation == other.truncation
            and self.n_bound == other.n_bound
            and self._terms == other._terms
        )

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __repr__(self) -> str:
        shown = " + ".join(
            f"({value})q^{n}t^{gamma.label()}" for (n, gamma), value in self.items()
        )
        return f"<FormalSeries D={self.truncation} {shown or '0'}>"


def series_mul(a: FormalSeries, b: FormalSeries) -> FormalSeries:
    """Truncated product; terms beyond ``truncation``/``n_bound`` are dropped."""
    a._check_compatible(b)
    product: Dict[TermIndex, Fraction] = {}
    limit, n_bound = a.truncation, a.n_bound
    for (n1, gamma1), c1 in a._terms.items():
        for (n2, gamma2), c2 in b._terms.items():
            if gamma1.degree + gamma2.degree > limit or abs(n1 + n2) > n_bound:
                continue
            index = (n1 + n2, gamma1 + gamma2)
            product[index] = product.get(index, Fraction(0)) + c1 * c2
    return a.like(product)


def series_log(s: FormalSeries) -> FormalSeries:
    """log s = sum_{l >= 1} (-1)^(l-1)/l (s - 1)^l; needs constant term 1."""
    if s.constant_term != 1:
        raise SeriesDomainError(f"log needs constant term 1, got {s.constant_term}")
    one = FormalSeries.one(s.context, s.truncation, s.n_bound)
    x = s - one
    result = FormalSeries.zero(s.context, s.truncation, s.n_bound)
    power = x
    for l in range(1, s.truncation + 1):
        if power.is_zero():
            break
        result = result + power.scale(Fraction(sign(l - 1), l))
        power = power * x
    return result


def series_exp(s: FormalSeries) -> FormalSeries:
    """exp s = sum_{l >= 0} s^l / l!; needs constant term 0."""
    if s.constant_term != 0:
        raise SeriesDomainError(f"exp needs constant term 0, got {s.constant_term}")
    result = FormalSeries.one(s.context, s.truncation, s.n_bound)
    term = result
    for l in range(1, s.truncation + 1):
        term = (term * s).scale(Fraction(1, l))
        if term.is_zero():
            break
        result = result + term
    return result


def series_power(s: FormalSeries, exponent: Number) -> FormalSeries:
    """s^e = exp(e log s) for any rational e; needs constant term 1."""
    return series_exp(series_log(s).scale(exponent))


class SupportsGv(Protocol):
    """Anything that yields N_{1,gamma} for a class (a ``GvTable``)."""

    def value(self, gamma: CurveClass) -> Fraction: ...


def slope_degree(graph: DualGraph, gamma: CurveClass, slope: Fraction) -> Optional[int]:
    """The n with n / (omega . gamma) = slope, or None if it is not an integer."""
    n = Fraction(slope) * graph.omega_pairing(gamma)
    return n.numerator if n.denominator == 1 else None


def gv_product_side(
    table: SupportsGv,
    graph: DualGraph,
    slope: Optional[Number] = None,
    truncation: int = 4,
    n_bound: int = 6,
    support: Optional[Iterable[TermIndex]] = None,
) -> FormalSeries:
    """prod (1 - (-1)^{gamma.H} q^n t^gamma)^{(gamma.H) N_{1,gamma}}.

    The factor set is either the slope family ``n / (omega . gamma) = slope``
    over every ``gamma`` with ``d(gamma) <= truncation``, or the explicit
    ``support`` list of ``(n, gamma)``.
    """
    if (slope is None) == (support is None):
        raise SeriesDomainError("pass exactly one of slope= or support=")
    if support is None:
        factors: List[TermIndex] = []
        for gamma in graph.classes_up_to(truncation):
            n = slope_degree(graph, gamma, Fraction(slope))  # type: ignore[arg-type]
            if n is not None and abs(n) <= n_bound:
                factors.append((n, gamma))
    else:
        factors = sorted(set(support), key=lambda idx: (idx[1].sort_key(), idx[0]))

    one = FormalSeries.one(graph, truncation, n_bound)
    result = one
    for n, gamma in factors:
        gv = table.value(gamma)
        h = graph.h_pairing(gamma)
        exponent = h * gv
        if exponent == 0:
            continue
        base = one - FormalSeries.monomial(
            graph, truncation, n_bound, n, gamma, sign(h)
        )
        result = result * series_power(base, exponent)
    log.debug("product side over %d factors has %d terms", len(factors), len(result.terms))
    return result
