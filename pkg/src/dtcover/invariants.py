"""
Closed forms, vanishing rules and tables for the local invariants N_{n,gamma}.

The values here are the inputs of the cover reduction (``dtcover.reduction``):

- ``base_chain`` gives N_{n,gamma} on a chain of P^1 for the two local
  geometries the engine knows, 0-super rigid chains of (-1,-1)-curves and
  chains inside a surface (surface type);
- ``type_IN_closed_form`` is the closed form on Kodaira cycles I_N, used to
  cross-check the reduction;
- ``euler_variant_rigid_m1m1`` is the Euler-characteristic invariant of a
  single (-1,-1)-curve, the standard counterexample to the Euler-weighted
  multiple cover formula;
- ``multiple_cover_eval`` assembles sum_{k | (n, gamma)} N_{1,gamma/k} / k^2.

Genus-zero invariants N_{1,gamma} are kept in a ``GvTable``. Tree base cases
are supplied by ``BaseProvider`` callables; ``ChainBaseProvider`` covers
chains and ``TableBaseProvider`` serves user values for other trees.
"""

import enum
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Protocol, Sequence, Tuple

from .arith import divisors, format_rational, gcd_all
from .errors import ConfigurationError, GraphDomainError, MissingDataError, UnsupportedError
from .graph import (
    CurveClass,
    DualGraph,
    ShapeKind,
    class_arith,
    classify,
    tree_signature,
)

log = logging.getLogger(__name__)


class GeometryKind(enum.Enum):
    SUPER_RIGID = "super-rigid"
    SURFACE_TYPE = "surface-type"

    @property
    def sign(self) -> int:
        return 1 if self is GeometryKind.SUPER_RIGID else -1


class WeightKind(enum.Enum):
    BEHREND = "behrend"
    EULER = "euler"


class Provenance(enum.Enum):
    CLOSED_FORM = "closed-form"
    DESCENT = "descent"
    USER = "user-supplied"


class GvTable:
    """N_{1,gamma} values with their provenance.

    With a ``graph`` attached, classes whose support is disconnected read as
    0 without being stored; any other absent class is missing data.
    """

    def __init__(self, graph: Optional[DualGraph] = None):
        self.graph = graph
        self._entries: Dict[CurveClass, Fraction] = {}
        self._provenance: Dict[CurveClass, Provenance] = {}

    @classmethod
    def from_values(
        cls,
        values: Mapping[CurveClass, object],
        graph: Optional[DualGraph] = None,
        provenance: Provenance = Provenance.USER,
    ) -> "GvTable":
        table = cls(graph)
        for gamma, value in values.items():
            table.set(gamma, Fraction(value), provenance)  # type: ignore[arg-type]
        return table

    def _disconnected(self, gamma: CurveClass) -> bool:
        return self.graph is not None and not self.graph.support_graph(gamma).connected

    def set(self, gamma: CurveClass, value: Fraction, provenance: Provenance) -> None:
        if gamma.is_zero():
            raise GraphDomainError("GV tables hold nonzero classes only")
        if self._disconnected(gamma):
            if value != 0:
                raise ConfigurationError(
                    f"N_1 of disconnected class {gamma.label()} must be 0, got {value}"
                )
            return
        self._entries[gamma] = Fraction(value)
        self._provenance[gamma] = provenance

    def value(self, gamma: CurveClass) -> Fraction:
        try:
            return self._entries[gamma]
        except KeyError:
            if self._disconnected(gamma):
                return Fraction(0)
            raise MissingDataError(f"GV table has no N_1 value for {gamma.label()}")

    def provenance(self, gamma: CurveClass) -> Optional[Provenance]:
        return self._provenance.get(gamma)

    def items(self) -> List[Tuple[CurveClass, Fraction]]:
        return sorted(self._entries.items(), key=lambda item: item[0].sort_key())

    def is_integral(self) -> bool:
        return all(value.denominator == 1 for value in self._entries.values())

    def __contains__(self, gamma: CurveClass) -> bool:
        return gamma in self._entries or (
            not gamma.is_zero() and self._disconnected(gamma)
        )

    def __len__(self) -> int:
        return len(self._entries)

    def __repr__(self) -> str:
        shown = ", ".join(
            f"{gamma.label()}: {format_rational(value)}" for gamma, value in self.items()
        )
        return f"<GvTable {{{shown}}}>"


def multiple_cover_eval(n: int, gamma: CurveClass, table: GvTable) -> Fraction:
    """sum_{k >= 1, k | (n, gamma)} N_{1, gamma/k} / k^2"""
    arith = class_arith(gamma, n)
    return sum(
        (table.value(gamma.divide(k)) / (k * k) for k in arith.divisors),
        Fraction(0),
    )


def base_chain(
    n: int,
    multiplicities: Sequence[int],
    kind: GeometryKind,
    weight: "WeightKind" = WeightKind.BEHREND,
) -> Fraction:
    """N_{n, a_1 C_1 + ... + a_N C_N} on a chain with full support.

    Non-zero only when all a_i equal a common k dividing n; then the value is
    1/k^2 for super-rigid chains and -1/k^2 for surface type (Behrend
    weight). With Euler weight surface-type values flip sign; super-rigid
    Euler values are known only for a single (-1,-1)-curve with n in {0, 1}.
    """
    if not multiplicities or any(a < 1 for a in multiplicities):
        raise GraphDomainError(f"chain multiplicities must be >= 1: {multiplicities}")
    if weight is WeightKind.EULER and kind is GeometryKind.SUPER_RIGID:
        if len(multiplicities) == 1 and n in (0, 1):
            return euler_variant_rigid_m1m1(n, multiplicities[0])
        raise UnsupportedError(
            "Euler-weighted values of super-rigid chains are only known for a "
            "single (-1,-1)-curve with n in {0, 1}"
        )
    k = multiplicities[0]
    if any(a != k for a in multiplicities) or n % k:
        return Fraction(0)
    value = Fraction(kind.sign, k * k)
    return -value if weight is WeightKind.EULER else value


def type_IN_closed_form(N: int, m: int, n: int, kind: GeometryKind) -> Fraction:
    """N_{n, m(C_1 + ... + C_N)} on a cycle I_N: +-sum_{k | (n, m)} N / k^2."""
    if N < 1 or m < 1:
        raise GraphDomainError(f"I_N closed form needs N, m >= 1 (got {N}, {m})")
    total = sum((Fraction(N, k * k) for k in divisors(gcd_all((n, m)))), Fraction(0))
    return kind.sign * total


def euler_variant_rigid_m1m1(n: int, m: int) -> Fraction:
    """Euler-weighted N^chi_{n, m[C]} of a single (-1,-1)-curve, n in {0, 1}."""
    if m < 1:
        raise GraphDomainError(f"multiplicity must be >= 1, got {m}")
    if n == 0:
        return Fraction((-1) ** (m - 1), m * m)
    if n == 1:
        return Fraction(1 if m == 1 else 0)
    raise UnsupportedError(f"N^chi_(n, m[C]) is only known for n in {{0, 1}}, got n={n}")


@dataclass(frozen=True)
class Vanishing:
    """Outcome of ``vanishing_rules``: a forced zero or a reduction to n = 1."""

    rule: str
    reason: str
    value: Optional[Fraction] = None

    @property
    def is_zero(self) -> bool:
        return self.value is not None


def vanishing_rules(graph: DualGraph, gamma: CurveClass, n: int) -> Optional[Vanishing]:
    """Structural shortcuts that decide N_{n,gamma} without any cover.

    Returns a zero for non-rational or disconnected support, the rewrite
    N_{n,gamma} = N_{1,gamma} for primitive gamma, and ``None`` otherwise.
    """
    if gamma.is_zero():
        raise GraphDomainError("N_{n,0} is undefined")
    sub = graph.support_graph(gamma)
    irrational = [vertex.id for vertex in sub.vertices if not vertex.rational]
    if irrational:
        return Vanishing(
            "non-rational",
            f"components {irrational} have positive geometric genus",
            Fraction(0),
        )
    if not sub.connected:
        return Vanishing("disconnected", "disconnected support", Fraction(0))
    if gamma.gcd == 1:
        return Vanishing("primitive", "primitive class: N_n does not depend on n")
    return None


class BaseProvider(Protocol):
    """Lookup of tree base cases: (tree, gamma, n, kind, weight) -> value or None."""

    def __call__(
        self,
        graph: DualGraph,
        gamma: CurveClass,
        n: int,
        kind: GeometryKind,
        weight: WeightKind,
    ) -> Optional[Fraction]: ...


class ChainBaseProvider:
    """Closed-form base values on chains (``base_chain``)."""

    def __call__(
        self,
        graph: DualGraph,
        gamma: CurveClass,
        n: int,
        kind: GeometryKind,
        weight: WeightKind,
    ) -> Optional[Fraction]:
        shape = classify(graph, gamma)
        if shape.kind is not ShapeKind.CHAIN:
            return None
        if weight is WeightKind.EULER and kind is GeometryKind.SUPER_RIGID:
            single = graph.support_graph(gamma).delta_c == 1
            if not (single and n in (0, 1)):
                return None
        return base_chain(n, [a for _, a in gamma.items()], kind, weight)

    def __repr__(self) -> str:
        return "ChainBaseProvider()"


@dataclass(frozen=True)
class BaseEntry:
    """One user base value: a tree class (by signature) at ``n`` (None: any n)."""

    signature: str
    n: Optional[int]
    value: Fraction
    label: str = ""


class TableBaseProvider:
    """User-supplied base values, matched up to tree isomorphism."""

    def __init__(
        self,
        entries: Iterable[BaseEntry] = (),
        kind: Optional[GeometryKind] = None,
        weight: Optional[WeightKind] = None,
    ):
        self.kind = kind
        self.weight = weight
        self._values: Dict[Tuple[str, Optional[int]], Fraction] = {}
        for entry in entries:
            self._values[(entry.signature, entry.n)] = entry.value

    @classmethod
    def from_classes(
        cls,
        graph: DualGraph,
        values: Iterable[Tuple[CurveClass, Optional[int], Fraction]],
        kind: Optional[GeometryKind] = None,
        weight: Optional[WeightKind] = None,
    ) -> "TableBaseProvider":
        entries = []
        for gamma, n, value in values:
            sub = graph.support_graph(gamma)
            if not sub.connected or sub.delta_n - sub.delta_c + 1 != 0:
                raise ConfigurationError(
                    f"base values must sit on tree supports, {gamma.label()} does not"
                )
            entries.append(
                BaseEntry(tree_signature(graph, gamma), n, Fraction(value), gamma.label())
            )
        return cls(entries, kind, weight)

    def __call__(
        self,
        graph: DualGraph,
        gamma: CurveClass,
        n: int,
        kind: GeometryKind,
        weight: WeightKind,
    ) -> Optional[Fraction]:
        if (self.kind is not None and kind is not self.kind) or (
            self.weight is not None and weight is not self.weight
        ):
            return None
        signature = tree_signature(graph, gamma)
        found = self._values.get((signature, n))
        if found is None:
            found = self._values.get((signature, None))
        return found

    def __len__(self) -> int:
        return len(self._values)

    def __repr__(self) -> str:
        return f"TableBaseProvider(entries={len(self)})"


class ChainedProvider:
    """First provider that knows the answer wins."""

    def __init__(self, *providers: BaseProvider):
        self.providers = providers

    def __call__(
        self,
        graph: DualGraph,
        gamma: CurveClass,
        n: int,
        kind: GeometryKind,
        weight: WeightKind,
    ) -> Optional[Fraction]:
        for provider in self.providers:
            value = provider(graph, gamma, n, kind, weight)
            if value is not None:
                return value
        return None

    def __repr__(self) -> str:
        return f"ChainedProvider{self.providers!r}"


def default_provider(user: Optional[BaseProvider] = None) -> BaseProvider:
    """User values (if any) take precedence over the chain closed forms."""
    chain = ChainBaseProvider()
    return ChainedProvider(user, chain) if user is not None else chain
