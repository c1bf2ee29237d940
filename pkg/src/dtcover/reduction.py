"""
Cyclic-cover reduction of N_{n,gamma} to trees of P^1.

For a connected support of genus g >= 1 the genus-zero invariant descends
along an m-fold cyclic cover (m the smallest odd number above d(gamma)):

    N_{1,gamma} = (1/m) sum_{sigma_* gamma~ = gamma} N_{1,gamma~}(U~)

Only lifts with connected support contribute, and every such lift has
strictly smaller (-l, g) in lexicographic order, so recursing on the lift
supports terminates on trees, where a ``BaseProvider`` supplies the value.
N_{n,gamma} itself is then assembled by the multiple cover formula.

``ReductionEngine`` memoises N_{1,gamma} per (support graph, gamma) behind a
lock so one engine can serve several threads. Every value comes with a
``ReductionStep`` tree recording covers, lift orbits and the (l, g) trace.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from threading import RLock
from typing import Any, Dict, List, Optional, Tuple

from .arith import format_rational, smallest_odd_above
from .cover import build_cover
from .errors import GraphDomainError, MissingBaseError, ReductionError, UnsupportedError
from .graph import CurveClass, DualGraph, class_arith, classify, cycle_basis, genus
from .invariants import (
    BaseProvider,
    GeometryKind,
    GvTable,
    Provenance,
    WeightKind,
    default_provider,
    euler_variant_rigid_m1m1,
    vanishing_rules,
)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class LiftRecord:
    """A deck-orbit representative used at one descent level."""

    cls: CurveClass
    orbit_size: int
    value: Fraction


@dataclass(frozen=True)
class ReductionStep:
    """One node of a reduction certificate: the value of N_{1,gamma}."""

    gamma: CurveClass
    graph: DualGraph
    length: int
    genus: Optional[int]
    value: Fraction
    rule: str
    m: Optional[int] = None
    cut_edge: Optional[str] = None
    lifts: Tuple[LiftRecord, ...] = ()
    children: Tuple["ReductionStep", ...] = ()

    @property
    def lex(self) -> Tuple[int, int]:
        """(-l, g); strictly decreasing along every path."""
        return (-self.length, self.genus or 0)

    def depth(self) -> int:
        """Number of cover steps on the longest path down to a leaf."""
        return 1 + max((child.depth() for child in self.children), default=-1)

    def paths(self) -> List[List[Tuple[int, int]]]:
        """Every root-to-leaf (l, g) trace."""
        here = (self.length, self.genus or 0)
        if not self.children:
            return [[here]]
        return [[here] + path for child in self.children for path in child.paths()]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "gamma": self.gamma.label(),
            "graph": self.graph.summary(),
            "l": self.length,
            "g": self.genus,
            "value": format_rational(self.value),
            "rule": self.rule,
            "m": self.m,
            "cut_edge": self.cut_edge,
            "lifts": [
                {
                    "class": lift.cls.label(),
                    "orbit": lift.orbit_size,
                    "value": format_rational(lift.value),
                }
                for lift in self.lifts
            ],
            "children": [child.to_dict() for child in self.children],
        }


@dataclass(frozen=True)
class Certificate:
    """How N_{n,gamma} was obtained: divisor terms, reduction trees, assumptions."""

    gamma: CurveClass
    n: int
    kind: GeometryKind
    weight: WeightKind
    value: Fraction
    rule: str
    terms: Tuple[Tuple[int, Fraction], ...] = ()
    steps: Tuple[ReductionStep, ...] = ()
    assumptions: Tuple[str, ...] = ()
    note: str = ""

    def to_dict(self) -> Dict[str, Any]:
        return {
            "gamma": self.gamma.label(),
            "n": self.n,
            "geometry": self.kind.value,
            "weight": self.weight.value,
            "value": format_rational(self.value),
            "rule": self.rule,
            "terms": [
                {"k": k, "N1": format_rational(value)} for k, value in self.terms
            ],
            "steps": [step.to_dict() for step in self.steps],
            "assumptions": list(self.assumptions),
            "note": self.note,
        }


@dataclass(frozen=True)
class Evaluation:
    value: Fraction
    certificate: Certificate


CRITICAL_LOCUS = "critical-locus structure on tree cyclic neighbourhoods (assumed)"


@dataclass(eq=False)
class ReductionEngine:
    """Evaluates N_{1,gamma} and N_{n,gamma} for one local geometry."""

    kind: GeometryKind
    weight: WeightKind = WeightKind.BEHREND
    provider: BaseProvider = field(default_factory=default_provider)
    loop_index: int = 0
    h_sheet: int = 0
    connected_only: bool = True
    _cache: Dict[Tuple[DualGraph, CurveClass], ReductionStep] = field(
        default_factory=dict, init=False, repr=False
    )
    _lock: Any = field(default_factory=RLock, init=False, repr=False)

    def n1(self, graph: DualGraph, gamma: CurveClass) -> Fraction:
        return self.n1_step(graph, gamma).value

    def n1_step(self, graph: DualGraph, gamma: CurveClass) -> ReductionStep:
        """N_{1,gamma} with its certificate, memoised on the support graph."""
        if gamma.is_zero():
            raise GraphDomainError("N_{1,0} is undefined")
        sub = graph.support_graph(gamma)
        key = (sub, gamma)
        with self._lock:
            cached = self._cache.get(key)
        if cached is not None:
            log.debug("cache hit for N1(%s)", gamma.label())
            return cached
        step = self._compute(sub, gamma)
        with self._lock:
            return self._cache.setdefault(key, step)

    def cache_size(self) -> int:
        with self._lock:
            return len(self._cache)

    def _compute(self, sub: DualGraph, gamma: CurveClass) -> ReductionStep:
        decision = vanishing_rules(sub, gamma, 1)
        if decision is not None and decision.is_zero:
            return ReductionStep(
                gamma, sub, gamma.length, None, Fraction(0), f"vanishing:{decision.rule}"
            )
        g = genus(sub)
        if g == 0:
            value = self.provider(sub, gamma, 1, self.kind, self.weight)
            if value is None:
                shape = classify(sub, gamma)
                raise MissingBaseError(
                    f"no base value for N_1 of {gamma.label()} on a {shape.label} "
                    f"{shape.kind.value} ({self.kind.value}, {self.weight.value})"
                )
            return ReductionStep(gamma, sub, gamma.length, 0, Fraction(value), "base")
        return self._descend(sub, gamma, g)

    def _descend(self, sub: DualGraph, gamma: CurveClass, g: int) -> ReductionStep:
        loops = cycle_basis(sub)
        if not 0 <= self.loop_index < len(loops):
            loop = loops[0]
        else:
            loop = loops[self.loop_index]
        m = smallest_odd_above(gamma.degree)
        cover = build_cover(sub, loop, m, self.h_sheet)
        lifts = cover.enumerate_lifts(
            gamma, connected_only=self.connected_only, up_to_deck=True
        )
        total = Fraction(0)
        records = []
        children = []
        for lift in lifts:
            child = self.n1_step(cover.graph, lift.cls)
            if child.genus is not None:
                self._check_decrease(gamma, g, child)
                children.append(child)
            records.append(LiftRecord(lift.cls, lift.orbit_size, child.value))
            total += lift.orbit_size * child.value
        log.debug(
            "descent of %s (l=%d, g=%d) through m=%d: %d orbits",
            gamma.label(),
            gamma.length,
            g,
            m,
            len(lifts),
        )
        return ReductionStep(
            gamma,
            sub,
            gamma.length,
            g,
            total / m,
            "descent",
            m=m,
            cut_edge=loop.cut_edge,
            lifts=tuple(records),
            children=tuple(children),
        )

    @staticmethod
    def _check_decrease(gamma: CurveClass, g: int, child: ReductionStep) -> None:
        child_genus = child.genus or 0
        if child.length > gamma.length:
            return
        if child.length == gamma.length and child_genus < g:
            return
        raise ReductionError(
            f"lift {child.gamma.label()} (l={child.length}, g={child_genus}) does not "
            f"decrease (-l, g) from {gamma.label()} (l={gamma.length}, g={g})"
        )

    def gv_table(self, graph: DualGraph, max_degree: int) -> GvTable:
        """N_{1,gamma} for every class of degree <= max_degree."""
        table = GvTable(graph)
        for gamma in graph.classes_up_to(max_degree):
            step = self.n1_step(graph, gamma)
            if step.rule == "vanishing:disconnected":
                continue
            provenance = Provenance.DESCENT if step.rule == "descent" else Provenance.CLOSED_FORM
            table.set(gamma, step.value, provenance)
        return table

    def evaluate(self, graph: DualGraph, gamma: CurveClass, n: int) -> Evaluation:
        """N_{n,gamma} with a certificate."""
        graph.check_class(gamma)
        decision = vanishing_rules(graph, gamma, n)
        assumptions = (CRITICAL_LOCUS,) if self.weight is WeightKind.BEHREND else ()
        if decision is not None and decision.is_zero:
            return Evaluation(
                Fraction(0),
                Certificate(
                    gamma,
                    n,
                    self.kind,
                    self.weight,
                    Fraction(0),
                    f"vanishing:{decision.rule}",
                    note=decision.reason,
                ),
            )
        sub = graph.support_graph(gamma)
        if self.weight is WeightKind.EULER and self.kind is GeometryKind.SUPER_RIGID:
            special = self._euler_rigid(sub, gamma, n)
            if special is not None:
                return special
        if genus(sub) == 0:
            explicit = self.provider(sub, gamma, n, self.kind, self.weight)
            if explicit is not None:
                return Evaluation(
                    Fraction(explicit),
                    Certificate(
                        gamma,
                        n,
                        self.kind,
                        self.weight,
                        Fraction(explicit),
                        "base",
                        assumptions=assumptions,
                        note=f"tree base value ({classify(sub, gamma).label})",
                    ),
                )
        terms = []
        steps = []
        total = Fraction(0)
        for k in class_arith(gamma, n).divisors:
            step = self.n1_step(sub, gamma.divide(k))
            terms.append((k, step.value))
            steps.append(step)
            total += step.value / (k * k)
        note = decision.reason if decision is not None else ""
        return Evaluation(
            total,
            Certificate(
                gamma,
                n,
                self.kind,
                self.weight,
                total,
                "multiple-cover",
                terms=tuple(terms),
                steps=tuple(steps),
                assumptions=assumptions,
                note=note,
            ),
        )

    def _euler_rigid(
        self, sub: DualGraph, gamma: CurveClass, n: int
    ) -> Optional[Evaluation]:
        if sub.delta_c == 1 and sub.delta_n == 0 and n in (0, 1):
            value = euler_variant_rigid_m1m1(n, gamma.degree)
            return Evaluation(
                value,
                Certificate(
                    gamma,
                    n,
                    self.kind,
                    self.weight,
                    value,
                    "euler-(-1,-1)-curve",
                    note="single (-1,-1)-curve, Euler weight",
                ),
            )
        if gamma.gcd == 1 or n == 1:
            return None
        raise UnsupportedError(
            "the Euler-weighted multiple cover formula fails for super-rigid "
            f"curves; N^chi_(n={n}) of {gamma.label()} is not computable"
        )


def descent_N1(
    graph: DualGraph,
    gamma: CurveClass,
    kind: GeometryKind,
    base_provider: Optional[BaseProvider] = None,
    weight: WeightKind = WeightKind.BEHREND,
    loop_index: int = 0,
    connected_only: bool = True,
) -> Fraction:
    """N_{1,gamma} via one (or more) cyclic-cover descents.

    Disconnected support gives 0 without building a cover; otherwise the
    support must have genus >= 1.
    """
    sub = graph.support_graph(gamma)
    if gamma.is_zero():
        raise GraphDomainError("N_{1,0} is undefined")
    if not sub.connected:
        return Fraction(0)
    if genus(sub) == 0:
        raise GraphDomainError(
            f"descent needs a support of positive genus, {gamma.label()} sits on a tree"
        )
    engine = ReductionEngine(
        kind,
        weight,
        default_provider(base_provider),
        loop_index=loop_index,
        connected_only=connected_only,
    )
    return engine.n1(graph, gamma)


def reduce_and_compute(
    graph: DualGraph,
    gamma: CurveClass,
    n: int,
    kind: GeometryKind,
    weight: WeightKind = WeightKind.BEHREND,
    base_provider: Optional[BaseProvider] = None,
) -> Evaluation:
    """N_{n,gamma} via the multiple cover formula over reduced N_1 values."""
    engine = ReductionEngine(kind, weight, default_provider(base_provider))
    return engine.evaluate(graph, gamma, n)
