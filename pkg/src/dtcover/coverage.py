"""
Which proven statement guarantees the multiple cover formula for a query.

``formula_coverage`` inspects (graph, gamma, geometry, weight) and names the
result that makes N_{n,gamma} = sum_k N_{1,gamma/k} / k^2 hold: a vanishing
rule, primitivity, a tree base case, the type I_N theorem, the prime
multiplicity theorems on an irreducible nodal curve, the small multiplicity
bound for Euler weights, or the general reduction (which depends on tree
neighbourhoods behaving). Euler weights on super-rigid curves are flagged as
known to fail.

``prime_lift_check`` replays the mechanism behind the prime multiplicity
theorem: every tree reached by iterated cyclic covers of p[C] carries a
primitive class or sits on a single component.
"""

import enum
import logging
from dataclasses import dataclass
from typing import List, Tuple

from .arith import is_prime, smallest_odd_above
from .cover import build_cover
from .errors import GraphDomainError
from .graph import CurveClass, DualGraph, ShapeKind, classify, cycle_basis, genus
from .invariants import GeometryKind, WeightKind, vanishing_rules
from .reduction import CRITICAL_LOCUS

log = logging.getLogger(__name__)


EULER_SMALL_BOUND = 10


class Statement(enum.Enum):
    VANISHING = "vanishing"
    PRIMITIVE = "primitive"
    TREE_BASE = "tree-base"
    TYPE_I = "type-I_N"
    PRIME_MULTIPLE = "prime-multiple"
    SMALL_MULTIPLICITY = "small-multiplicity"
    GENERAL_REDUCTION = "general-reduction"
    KNOWN_FALSE = "known-false"


@dataclass(frozen=True)
class Coverage:
    statement: Statement
    proven: bool
    assumptions: Tuple[str, ...] = ()
    note: str = ""

    def to_dict(self) -> dict:
        return {
            "statement": self.statement.value,
            "proven": self.proven,
            "assumptions": list(self.assumptions),
            "note": self.note,
        }


def is_exceptional_star(graph: DualGraph, gamma: CurveClass) -> bool:
    """Five components, one meeting the other four once, every multiplicity 2.

    This degree-10 tree is not ADE and shows up among the lifts of 10[C].
    """
    sub = graph.support_graph(gamma)
    if sub.delta_c != 5 or sub.delta_n != 4 or not sub.connected:
        return False
    degrees = sorted(d for _, d in sub.nx_graph.degree())
    return degrees == [1, 1, 1, 1, 4] and all(a == 2 for _, a in gamma.items())


def _prime_multiple(sub: DualGraph, gamma: CurveClass) -> bool:
    return sub.delta_c == 1 and is_prime(gamma.degree)


def formula_coverage(
    graph: DualGraph,
    gamma: CurveClass,
    kind: GeometryKind,
    weight: WeightKind = WeightKind.BEHREND,
) -> Coverage:
    decision = vanishing_rules(graph, gamma, 0)
    if decision is not None:
        statement = Statement.VANISHING if decision.is_zero else Statement.PRIMITIVE
        return Coverage(statement, True, note=decision.reason)
    euler = weight is WeightKind.EULER
    if euler and kind is GeometryKind.SUPER_RIGID:
        return Coverage(
            Statement.KNOWN_FALSE,
            False,
            note="Euler weights break the formula for a (-1,-1)-curve at even multiplicity",
        )
    sub = graph.support_graph(gamma)
    shape = classify(graph, gamma)
    if shape.is_tree:
        if is_exceptional_star(graph, gamma):
            return Coverage(
                Statement.TREE_BASE,
                False,
                note="exceptional five-component star at multiplicity 10; "
                "needs a user base value",
            )
        if shape.kind is ShapeKind.CHAIN:
            return Coverage(Statement.TREE_BASE, True, note=f"closed form on {shape.label}")
        if shape.kind is ShapeKind.ADE_TREE and kind is GeometryKind.SURFACE_TYPE:
            return Coverage(
                Statement.TREE_BASE,
                True,
                note=f"{shape.label} of surface type; values need a base table",
            )
        return Coverage(
            Statement.TREE_BASE, False, note=f"{shape.label} needs a user base value"
        )
    if euler:
        if gamma.degree <= EULER_SMALL_BOUND:
            return Coverage(
                Statement.SMALL_MULTIPLICITY,
                True,
                note=f"surface type with d(gamma) = {gamma.degree} <= {EULER_SMALL_BOUND}",
            )
        if _prime_multiple(sub, gamma):
            return Coverage(
                Statement.PRIME_MULTIPLE,
                True,
                note=f"{gamma.degree} times an irreducible nodal curve of surface type",
            )
        return Coverage(
            Statement.GENERAL_REDUCTION,
            False,
            ("Euler formula on every tree neighbourhood",),
        )
    if shape.kind is ShapeKind.CYCLE:
        return Coverage(Statement.TYPE_I, True, note=f"support of type {shape.label}")
    if _prime_multiple(sub, gamma):
        return Coverage(
            Statement.PRIME_MULTIPLE,
            True,
            (CRITICAL_LOCUS,),
            note=f"{gamma.degree} times an irreducible nodal curve",
        )
    return Coverage(
        Statement.GENERAL_REDUCTION,
        False,
        (CRITICAL_LOCUS, "formula on every tree neighbourhood"),
    )


@dataclass(frozen=True)
class TreeLift:
    """A class on a tree reached by iterated covers, with the cover depth."""

    cls: CurveClass
    depth: int

    @property
    def is_primitive(self) -> bool:
        return self.cls.gcd == 1

    @property
    def single_component(self) -> bool:
        return self.cls.length == 1


def tree_lifts(graph: DualGraph, gamma: CurveClass) -> List[TreeLift]:
    """Connected lifts of ``gamma`` that land on trees, up to deck action.

    Follows the same cover choices as the reduction: first basis loop of the
    support, m the smallest odd number above d(gamma).
    """
    found: List[TreeLift] = []

    def walk(base: DualGraph, cls: CurveClass, depth: int) -> None:
        sub = base.support_graph(cls)
        if genus(sub) == 0:
            found.append(TreeLift(cls, depth))
            return
        cover = build_cover(sub, cycle_basis(sub)[0], smallest_odd_above(cls.degree))
        for lift in cover.enumerate_lifts(cls, connected_only=True, up_to_deck=True):
            walk(cover.graph, lift.cls, depth + 1)

    if not graph.support_graph(gamma).connected:
        raise GraphDomainError(f"{gamma.label()} has disconnected support")
    walk(graph, gamma, 0)
    return found


@dataclass(frozen=True)
class PrimeLiftReport:
    vertex: str
    p: int
    lifts: Tuple[TreeLift, ...]

    @property
    def ok(self) -> bool:
        return all(lift.is_primitive or lift.single_component for lift in self.lifts)


def prime_lift_check(graph: DualGraph, vertex: str, p: int) -> PrimeLiftReport:
    """Every tree lift of p[C] is primitive or lives on one component."""
    if not is_prime(p):
        raise GraphDomainError(f"{p} is not prime")
    component = graph.induced([graph.vertex(vertex).id])
    if genus(component) == 0:
        raise GraphDomainError(f"component {vertex!r} has no node to unwind")
    lifts = tree_lifts(component, CurveClass({vertex: p}))
    report = PrimeLiftReport(vertex, p, tuple(lifts))
    log.info("prime lift check %d[%s]: %d tree lifts, ok=%s", p, vertex, len(lifts), report.ok)
    return report


@dataclass(frozen=True)
class Reach:
    m: int
    proven: bool
    reason: str


def k3_reach(m: int) -> Reach:
    """Multiplicities for which the K3 formula is a theorem: m <= 10 or m prime."""
    if m < 1:
        raise GraphDomainError(f"multiplicity must be >= 1, got {m}")
    if m <= EULER_SMALL_BOUND:
        return Reach(m, True, f"m = {m} <= {EULER_SMALL_BOUND}")
    if is_prime(m):
        return Reach(m, True, f"m = {m} is prime")
    return Reach(m, False, f"m = {m} is composite and above {EULER_SMALL_BOUND}")
