"""
Parabolic stable pair series and the identities that tie them to N_{1,gamma}.

For a fixed slope mu the parabolic invariants DT^par_{n,gamma} are the
coefficients of the product

    prod_gamma (1 - (-1)^{gamma.H} q^n t^gamma)^{(gamma.H) N_{1,gamma}},
    n / (omega . gamma) = mu,

and their logarithm, the hat invariants, is the splitting sum

    DT^_{n,gamma} = sum_l (-1)^{l-1}/l sum_{gamma_1+...+gamma_l = gamma}
                    prod_i DT^par_{n_i,gamma_i}

over splittings that stay in the slope family. The checks here compare:

- ``check_log_form``: DT^_{n,gamma} against
  sum_{k | (n,gamma)} (-1)^{gamma.H-1} (gamma.H) N_{1,gamma/k} / k^2;
- ``descent_dtpar_check``: DT^par on the base against the signed sum over
  lifts to an odd cyclic cover;
- ``descent_n1_check``: N_{1,gamma} against (1/m) times the sum over all lifts;
- ``telescoping_check``: every intermediate expression of the chain that
  derives the first identity from the two descent formulas.

Every vertex in the support of a parabolic query must meet H.
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property
from fractions import Fraction
from typing import Any, Callable, Dict, List, Mapping, Optional, Sequence, Tuple

from .arith import format_rational, sign, smallest_odd_above
from .cover import CoverGraph, build_cover
from .errors import ConfigurationError, GraphDomainError, MissingDataError, SeriesDomainError
from .families import chain_graph
from .graph import (
    CurveClass,
    DualGraph,
    ShapeKind,
    class_arith,
    classify,
    cycle_basis,
    genus,
    support_is_connected,
)
from .invariants import (
    BaseProvider,
    GeometryKind,
    GvTable,
    Provenance,
    WeightKind,
    default_provider,
    euler_variant_rigid_m1m1,
    multiple_cover_eval,
    type_IN_closed_form,
)
from .reduction import ReductionEngine
from .registry import Registry, register
from .series import (
    FormalSeries,
    SupportsGv,
    TermIndex,
    gv_product_side,
    series_log,
    slope_degree,
)

log = logging.getLogger(__name__)

Lookup = Callable[[int, CurveClass], Fraction]


def require_h_degree(graph: DualGraph, gamma: CurveClass) -> None:
    missing = [v for v, _ in gamma.items() if graph.vertex(v).h_deg < 1]
    if missing:
        raise ConfigurationError(
            f"parabolic pairs need H.C >= 1 on the support of {gamma.label()}; "
            f"{missing} have H-degree 0"
        )


def query_slope(graph: DualGraph, gamma: CurveClass, n: int) -> Fraction:
    return Fraction(n, graph.omega_pairing(gamma))


class EngineGv:
    """N_{1,gamma} on one graph, read from a shared ``ReductionEngine``."""

    def __init__(self, engine: ReductionEngine, graph: DualGraph):
        self.engine = engine
        self.graph = graph

    def value(self, gamma: CurveClass) -> Fraction:
        return self.engine.n1(self.graph, gamma)


@dataclass(frozen=True)
class DtParTable:
    """DT^par_{n,gamma} for one slope family, up to the truncation."""

    graph: DualGraph
    slope: Fraction
    truncation: int
    n_bound: int
    entries: Mapping[TermIndex, Fraction] = field(repr=False)
    h_context: Mapping[str, int] = field(repr=False)

    def value(self, n: int, gamma: CurveClass) -> Fraction:
        if gamma.is_zero():
            raise GraphDomainError("DT^par is indexed by nonzero classes")
        if gamma.degree > self.truncation or abs(n) > self.n_bound:
            raise MissingDataError(
                f"DT^par_({n}, {gamma.label()}) lies beyond D={self.truncation}, "
                f"n_bound={self.n_bound}"
            )
        if slope_degree(self.graph, gamma, self.slope) != n:
            raise MissingDataError(
                f"DT^par_({n}, {gamma.label()}) is outside the slope {self.slope} family"
            )
        return self.entries.get((n, gamma), Fraction(0))

    def items(self) -> List[Tuple[TermIndex, Fraction]]:
        return sorted(
            self.entries.items(), key=lambda item: (item[0][1].sort_key(), item[0][0])
        )

    def is_integral(self) -> bool:
        return all(value.denominator == 1 for value in self.entries.values())

    @cached_property
    def log_series(self) -> FormalSeries:
        """log(1 + sum DT^par q^n t^gamma) over the slope family."""
        terms: Dict[TermIndex, Fraction] = dict(self.entries)
        terms[(0, CurveClass.zero())] = Fraction(1)
        return series_log(FormalSeries(self.graph, self.truncation, self.n_bound, terms))


def dt_par_from_gv(
    table: SupportsGv,
    graph: DualGraph,
    slope: Fraction,
    truncation: int = 4,
    n_bound: int = 6,
) -> DtParTable:
    """Expand the product side for slope ``slope`` and keep its coefficients."""
    series = gv_product_side(
        table, graph, slope=slope, truncation=truncation, n_bound=n_bound
    )
    entries = {
        index: value for index, value in series.terms.items() if not index[1].is_zero()
    }
    return DtParTable(
        graph,
        Fraction(slope),
        truncation,
        n_bound,
        entries,
        {vertex.id: vertex.h_deg for vertex in graph.vertices},
    )


def dt_par_coefficient(
    table: SupportsGv, graph: DualGraph, n: int, gamma: CurveClass
) -> Fraction:
    """DT^par_{n,gamma} alone, from the factors of classes below ``gamma``."""
    slope = query_slope(graph, gamma, n)
    support = []
    for beta in graph.classes_below(gamma):
        n_beta = slope_degree(graph, beta, slope)
        if n_beta is not None:
            support.append((n_beta, beta))
    series = gv_product_side(
        table, graph, support=support, truncation=gamma.degree, n_bound=max(1, abs(n))
    )
    return series.coefficient(n, gamma)


def splitting_sum(
    lookup: Lookup, graph: DualGraph, n: int, gamma: CurveClass, slope: Fraction
) -> Fraction:
    """sum_l (-1)^{l-1}/l over ordered splittings of (n, gamma) in the slope family."""
    if slope_degree(graph, gamma, slope) != n:
        raise SeriesDomainError(
            f"(n={n}, {gamma.label()}) does not lie on slope {slope}"
        )
    parts: Dict[CurveClass, Fraction] = {}
    for beta in graph.classes_below(gamma):
        n_beta = slope_degree(graph, beta, slope)
        if n_beta is not None:
            value = lookup(n_beta, beta)
            if value:
                parts[beta] = value
    current = dict(parts)
    total = current.get(gamma, Fraction(0))
    for l in range(2, gamma.degree + 1):
        grown: Dict[CurveClass, Fraction] = {}
        for beta, a in current.items():
            for part, b in parts.items():
                joined = beta + part
                if joined <= gamma:
                    grown[joined] = grown.get(joined, Fraction(0)) + a * b
        if not grown:
            break
        total += Fraction(sign(l - 1), l) * grown.get(gamma, Fraction(0))
        current = grown
    return total


def dt_hat(
    table: DtParTable, n: int, gamma: CurveClass, slope: Optional[Fraction] = None
) -> Fraction:
    """The hat invariant at (n, gamma), by the splitting sum over ``table``."""
    chosen = table.slope if slope is None else Fraction(slope)
    return splitting_sum(table.value, table.graph, n, gamma, chosen)


def dt_hat_by_log(table: DtParTable, n: int, gamma: CurveClass) -> Fraction:
    """The hat invariant read off ``series_log`` of the assembled DT^par series."""
    table.value(n, gamma)  # range and slope checks
    return table.log_series.coefficient(n, gamma)


def log_form_rhs(
    graph: DualGraph, gamma: CurveClass, n: int, gv: SupportsGv
) -> Fraction:
    h = graph.h_pairing(gamma)
    return sum(
        (
            Fraction(sign(h - 1) * h, k * k) * gv.value(gamma.divide(k))
            for k in class_arith(gamma, n).divisors
        ),
        Fraction(0),
    )


@dataclass(frozen=True)
class Report:
    """Outcome of one identity check at one (n, gamma)."""

    identity: str
    subject: str
    lhs: Fraction
    rhs: Fraction
    passed: bool
    certificate: Dict[str, Any] = field(default_factory=dict)

    @property
    def verdict(self) -> str:
        return "PASS" if self.passed else "FAIL"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "identity": self.identity,
            "subject": self.subject,
            "lhs": format_rational(self.lhs),
            "rhs": format_rational(self.rhs),
            "verdict": self.verdict,
            "certificate": self.certificate,
        }


def _subject(n: int, gamma: CurveClass) -> str:
    return f"n={n}, gamma={gamma.label()}"


def _finish(report: Report) -> Report:
    if not report.passed:
        log.info(
            "%s failed at %s: %s != %s",
            report.identity,
            report.subject,
            format_rational(report.lhs),
            format_rational(report.rhs),
        )
    return report


def check_log_form(
    graph: DualGraph,
    gamma: CurveClass,
    n: int,
    gv: SupportsGv,
    dtpar: DtParTable,
) -> Report:
    require_h_degree(graph, gamma)
    lhs = dt_hat(dtpar, n, gamma)
    by_log = dt_hat_by_log(dtpar, n, gamma)
    rhs = log_form_rhs(graph, gamma, n, gv)
    integral = dtpar.is_integral()
    gv_integral = isinstance(gv, GvTable) and gv.is_integral()
    return _finish(
        Report(
            "log-form",
            _subject(n, gamma),
            lhs,
            rhs,
            lhs == rhs == by_log and (integral or not gv_integral),
            {
                "slope": format_rational(dtpar.slope),
                "dtpar": format_rational(dtpar.value(n, gamma)),
                "dtpar_integral": integral,
                "hat_by_log": format_rational(by_log),
            },
        )
    )


def descent_cover(
    graph: DualGraph, gamma: CurveClass, loop_index: int = 0, h_sheet: int = 0
) -> CoverGraph:
    """The odd cover used by the descent checks: m the smallest odd above d(gamma)."""
    if not graph.connected or genus(graph) == 0:
        raise GraphDomainError("descent checks need a connected graph of positive genus")
    loops = cycle_basis(graph)
    loop = loops[loop_index] if 0 <= loop_index < len(loops) else loops[0]
    return build_cover(graph, loop, smallest_odd_above(gamma.degree), h_sheet)


class ParabolicSide:
    """DT^par and hat values on one graph, cached per (n, class)."""

    def __init__(self, graph: DualGraph, gv: SupportsGv):
        self.graph = graph
        self.gv = gv
        self._dtpar: Dict[TermIndex, Fraction] = {}

    def dt_par(self, n: int, gamma: CurveClass) -> Fraction:
        key = (n, gamma)
        if key not in self._dtpar:
            self._dtpar[key] = dt_par_coefficient(self.gv, self.graph, n, gamma)
        return self._dtpar[key]

    def hat(self, n: int, gamma: CurveClass) -> Fraction:
        return splitting_sum(
            self.dt_par, self.graph, n, gamma, query_slope(self.graph, gamma, n)
        )


def _engine(
    engine: Optional[ReductionEngine],
    kind: GeometryKind,
    weight: WeightKind,
    provider: Optional[BaseProvider],
) -> ReductionEngine:
    if engine is not None:
        return engine
    return ReductionEngine(kind, weight, default_provider(provider))


def _check_truncation(gamma: CurveClass, truncation: int) -> None:
    if gamma.degree > truncation:
        raise SeriesDomainError(
            f"d({gamma.label()}) = {gamma.degree} exceeds the truncation {truncation}"
        )


def descent_dtpar_check(
    graph: DualGraph,
    gamma: CurveClass,
    n: int,
    kind: GeometryKind,
    truncation: int = 4,
    weight: WeightKind = WeightKind.BEHREND,
    provider: Optional[BaseProvider] = None,
    engine: Optional[ReductionEngine] = None,
    h_sheet: int = 0,
    loop_index: int = 0,
) -> Report:
    """DT^par_{n,gamma} = sum over lifts of (-1)^{gamma.H - lift.H~} DT^par on the cover.

    Lifts missing the H-sheet have no parabolic pairs and are skipped.
    """
    require_h_degree(graph, gamma)
    _check_truncation(gamma, truncation)
    engine = _engine(engine, kind, weight, provider)
    cover = descent_cover(graph, gamma, loop_index, h_sheet)
    base = ParabolicSide(graph, EngineGv(engine, graph))
    lifted = ParabolicSide(cover.graph, EngineGv(engine, cover.graph))
    h = graph.h_pairing(gamma)
    lhs = base.dt_par(n, gamma)
    rhs = Fraction(0)
    used = skipped = 0
    for lift in cover.enumerate_lifts(gamma):
        h_lift = cover.lift_h_pairing(lift.cls)
        if h_lift == 0:
            skipped += 1
            continue
        used += 1
        rhs += sign(h - h_lift) * lifted.dt_par(n, lift.cls)
    return _finish(
        Report(
            "descent-dtpar",
            _subject(n, gamma),
            lhs,
            rhs,
            lhs == rhs,
            {
                "m": cover.m,
                "cut_edge": cover.loop.cut_edge,
                "h_sheet": cover.h_sheet,
                "lifts_used": used,
                "lifts_off_H": skipped,
            },
        )
    )


def _equal_cycle_multiplicity(graph: DualGraph, gamma: CurveClass) -> Optional[int]:
    shape = classify(graph, gamma)
    multiplicities = {a for _, a in gamma.items()}
    if shape.kind is ShapeKind.CYCLE and len(multiplicities) == 1:
        return multiplicities.pop()
    return None


def descent_n1_check(
    graph: DualGraph,
    gamma: CurveClass,
    kind: GeometryKind,
    weight: WeightKind = WeightKind.BEHREND,
    provider: Optional[BaseProvider] = None,
    engine: Optional[ReductionEngine] = None,
    h_sheet: int = 0,
    loop_index: int = 0,
) -> Report:
    """N_{1,gamma} from the engine against (1/m) sum over every lift, connected or not."""
    engine = _engine(engine, kind, weight, provider)
    cover = descent_cover(graph, gamma, loop_index, h_sheet)
    lhs = engine.n1(graph, gamma)
    lifts = cover.enumerate_lifts(gamma)
    rhs = sum((engine.n1(cover.graph, lift.cls) for lift in lifts), Fraction(0)) / cover.m
    certificate: Dict[str, Any] = {"m": cover.m, "lifts": len(lifts)}
    passed = lhs == rhs
    multiplicity = _equal_cycle_multiplicity(graph, gamma)
    if multiplicity is not None and weight is WeightKind.BEHREND:
        closed = type_IN_closed_form(gamma.length, multiplicity, 1, kind)
        certificate["closed_form"] = format_rational(closed)
        passed = passed and closed == lhs
    return _finish(Report("descent-n1", _subject(1, gamma), lhs, rhs, passed, certificate))


def telescoping_check(
    graph: DualGraph,
    gamma: CurveClass,
    n: int,
    kind: GeometryKind,
    truncation: int = 4,
    weight: WeightKind = WeightKind.BEHREND,
    provider: Optional[BaseProvider] = None,
    engine: Optional[ReductionEngine] = None,
    h_sheet: int = 0,
    loop_index: int = 0,
) -> Report:
    """Evaluate each expression of the chain from DT^_{n,gamma} to the log form.

    The steps, in order: the hat invariant on the base; the splitting sum
    with every DT^par replaced by its cover sum; the same regrouped by lifts
    of gamma; the per-lift log form on the cover; grouped by divisor k;
    averaged over the deck group; with the deck sum of lift.H~ replaced by
    gamma.H; and with the cover sum of N_1 replaced by N_{1,gamma/k} through
    the N_1 descent. The last is compared with the right-hand side computed
    from engine values.
    """
    require_h_degree(graph, gamma)
    _check_truncation(gamma, truncation)
    engine = _engine(engine, kind, weight, provider)
    cover = descent_cover(graph, gamma, loop_index, h_sheet)
    base = ParabolicSide(graph, EngineGv(engine, graph))
    lifted = ParabolicSide(cover.graph, EngineGv(engine, cover.graph))
    cover_n1 = EngineGv(engine, cover.graph).value
    h = graph.h_pairing(gamma)
    lead = sign(h - 1)
    slope = query_slope(graph, gamma, n)
    lifts = [lift.cls for lift in cover.enumerate_lifts(gamma)]
    divisors = class_arith(gamma, n).divisors

    def substituted(n_part: int, beta: CurveClass) -> Fraction:
        h_beta = graph.h_pairing(beta)
        total = Fraction(0)
        for lift in cover.enumerate_lifts(beta):
            h_lift = cover.lift_h_pairing(lift.cls)
            if h_lift:
                total += sign(h_beta - h_lift) * lifted.dt_par(n_part, lift.cls)
        return total

    steps: List[Tuple[str, Fraction]] = []
    steps.append(("hat_base", base.hat(n, gamma)))
    steps.append(("lhs1_substituted", splitting_sum(substituted, graph, n, gamma, slope)))
    steps.append(
        (
            "lhs1_regrouped",
            sum(
                (
                    sign(h - cover.lift_h_pairing(lift)) * lifted.hat(n, lift)
                    for lift in lifts
                    if cover.lift_h_pairing(lift)
                ),
                Fraction(0),
            ),
        )
    )
    steps.append(
        (
            "lhs2_cover_formula",
            sum(
                (
                    Fraction(lead * cover.lift_h_pairing(lift), k * k)
                    * cover_n1(lift.divide(k))
                    for lift in lifts
                    for k in class_arith(lift, n).divisors
                ),
                Fraction(0),
            ),
        )
    )

    def by_divisor(weight_of: Callable[[CurveClass, int], Fraction]) -> Fraction:
        total = Fraction(0)
        for k in divisors:
            inner = sum(
                (weight_of(lift, k) for lift in lifts if lift.is_divisible_by(k)),
                Fraction(0),
            )
            total += Fraction(lead, k * k) * inner
        return total

    steps.append(
        (
            "lhs2_by_divisor",
            by_divisor(lambda lift, k: cover.lift_h_pairing(lift) * cover_n1(lift.divide(k))),
        )
    )
    steps.append(
        (
            "lhs2_deck_averaged",
            by_divisor(
                lambda lift, k: sum(
                    (
                        cover.lift_h_pairing(moved) * cover_n1(moved.divide(k))
                        for moved in (cover.translate(lift, g) for g in range(cover.m))
                    ),
                    Fraction(0),
                )
                / cover.m
            ),
        )
    )
    steps.append(
        (
            "lhs2_pushed",
            by_divisor(lambda lift, k: Fraction(h, cover.m) * cover_n1(lift.divide(k))),
        )
    )
    lhs3 = Fraction(0)
    for k in divisors:
        quotient = gamma.divide(k)
        descended = sum(
            (cover_n1(lift.cls) for lift in cover.enumerate_lifts(quotient)), Fraction(0)
        ) / cover.m
        lhs3 += Fraction(lead * h, k * k) * descended
    steps.append(("lhs3", lhs3))
    rhs = log_form_rhs(graph, gamma, n, EngineGv(engine, graph))

    values = [value for _, value in steps]
    passed = all(value == rhs for value in values)
    return _finish(
        Report(
            "telescoping",
            _subject(n, gamma),
            values[0],
            rhs,
            passed,
            {
                "m": cover.m,
                "steps": [
                    {"name": name, "value": format_rational(value)} for name, value in steps
                ],
            },
        )
    )


@dataclass
class VerifyContext:
    """Everything an identity runner needs; one engine shared by every check."""

    graph: DualGraph
    kind: GeometryKind
    weight: WeightKind = WeightKind.BEHREND
    provider: Optional[BaseProvider] = None
    truncation: int = 4
    n_bound: int = 6
    n_values: Sequence[int] = (0, 1)
    h_sheet: int = 0
    loop_index: int = 0
    engine: ReductionEngine = field(init=False)

    def __post_init__(self) -> None:
        if self.truncation < 1 or self.n_bound < 1:
            raise ConfigurationError("truncation and n-bound must be positive")
        outside = [n for n in self.n_values if abs(n) > self.n_bound]
        if outside:
            raise ConfigurationError(f"n values {outside} exceed n-bound {self.n_bound}")
        self.engine = ReductionEngine(
            self.kind,
            self.weight,
            default_provider(self.provider),
            loop_index=self.loop_index,
            h_sheet=self.h_sheet,
        )

    def classes(self, connected_only: bool = False) -> List[CurveClass]:
        return [
            gamma
            for gamma in self.graph.classes_up_to(self.truncation)
            if not connected_only or support_is_connected(self.graph, gamma)
        ]


IdentityRunner = Callable[[VerifyContext], List[Report]]

IDENTITIES: Registry[IdentityRunner] = Registry("identities")


@register(IDENTITIES, "log-form")
def run_log_form(ctx: VerifyContext) -> List[Report]:
    gv = ctx.engine.gv_table(ctx.graph, ctx.truncation)
    tables: Dict[Fraction, DtParTable] = {}
    reports = []
    for gamma in ctx.classes():
        for n in ctx.n_values:
            slope = query_slope(ctx.graph, gamma, n)
            if slope not in tables:
                tables[slope] = dt_par_from_gv(
                    gv, ctx.graph, slope, ctx.truncation, ctx.n_bound
                )
            reports.append(check_log_form(ctx.graph, gamma, n, gv, tables[slope]))
    return reports


@register(IDENTITIES, "descent-dtpar")
def run_descent_dtpar(ctx: VerifyContext) -> List[Report]:
    return [
        descent_dtpar_check(
            ctx.graph,
            gamma,
            n,
            ctx.kind,
            ctx.truncation,
            ctx.weight,
            engine=ctx.engine,
            h_sheet=ctx.h_sheet,
            loop_index=ctx.loop_index,
        )
        for gamma in ctx.classes(connected_only=True)
        for n in ctx.n_values
    ]


@register(IDENTITIES, "descent-n1")
def run_descent_n1(ctx: VerifyContext) -> List[Report]:
    return [
        descent_n1_check(
            ctx.graph,
            gamma,
            ctx.kind,
            ctx.weight,
            engine=ctx.engine,
            h_sheet=ctx.h_sheet,
            loop_index=ctx.loop_index,
        )
        for gamma in ctx.classes(connected_only=True)
    ]


@register(IDENTITIES, "telescoping")
def run_telescoping(ctx: VerifyContext) -> List[Report]:
    return [
        telescoping_check(
            ctx.graph,
            gamma,
            n,
            ctx.kind,
            ctx.truncation,
            ctx.weight,
            engine=ctx.engine,
            h_sheet=ctx.h_sheet,
            loop_index=ctx.loop_index,
        )
        for gamma in ctx.classes(connected_only=True)
        for n in ctx.n_values
    ]


def euler_counterexample(m: int) -> Report:
    """N^chi_{0,m[C]} of a (-1,-1)-curve against its multiple cover prediction.

    The two differ exactly when m is even; the report passes when that
    pattern is reproduced.
    """
    if m < 1:
        raise GraphDomainError(f"multiplicity must be >= 1, got {m}")
    curve = chain_graph(1)
    vertex = curve.vertex_ids[0]
    table = GvTable.from_values(
        {
            CurveClass({vertex: j}): euler_variant_rigid_m1m1(1, j)
            for j in range(1, m + 1)
        },
        curve,
        Provenance.CLOSED_FORM,
    )
    gamma = CurveClass({vertex: m})
    lhs = euler_variant_rigid_m1m1(0, m)
    rhs = multiple_cover_eval(0, gamma, table)
    expect_equal = m % 2 == 1
    return _finish(
        Report(
            "euler-counterexample",
            _subject(0, gamma),
            lhs,
            rhs,
            (lhs == rhs) == expect_equal,
            {"m": m, "formula_holds": lhs == rhs, "expected_to_hold": expect_equal},
        )
    )


@register(IDENTITIES, "euler-counterexample")
def run_euler_counterexample(ctx: VerifyContext) -> List[Report]:
    return [euler_counterexample(m) for m in range(2, max(2, ctx.truncation) + 1)]
