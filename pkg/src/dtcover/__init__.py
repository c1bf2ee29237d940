"""
dtcover: Exact Local DT Invariants of Nodal Rational Curves

dtcover computes local generalized Donaldson-Thomas invariants N_{n,gamma} of
one-cycles supported on configurations of nodal rational curves, and checks
the generating series identities around the multiple cover formula on
concrete data. Everything is exact: values are ``fractions.Fraction`` and
series are truncated, never approximated.

Key Features:
    - Dual graphs of nodal curves with genus, cycle bases and ADE / I_N shapes
    - m-fold cyclic covers with deck action, pushforward and lift enumeration
    - Reduction of N_{1,gamma} to trees of P^1 with memoised, thread-safe
      evaluation and a certificate for every value
    - Closed forms for chains, Kodaira cycles I_N and the Euler-weighted
      (-1,-1)-curve counterexample
    - Truncated power series with log, exp and the Gopakumar-Vafa product
    - Parabolic stable pair checks: log form, both descent formulas and the
      step-by-step telescoping chain
    - K3 invariants from Goettsche's formula
    - A JSON driven command line tool (``dtcover``)

Core Components:
    - DualGraph, CurveClass: the curve configuration and its classes
    - build_cover, CoverGraph: cyclic covers
    - ReductionEngine: N_{1,gamma} and N_{n,gamma} with certificates
    - FormalSeries: truncated series in q^n t^gamma
    - IDENTITIES: named verification runners

Quick Start:
    >>> from dtcover import CurveClass, GeometryKind, ReductionEngine, family_graph
    >>> graph = family_graph("I1")
    >>> engine = ReductionEngine(GeometryKind.SUPER_RIGID)
    >>> engine.evaluate(graph, CurveClass({"c1": 2}), 0).value
    Fraction(5, 4)

Thread Safety:
    Graphs, classes, covers and series are immutable. ``ReductionEngine``
    guards its memo cache with an RLock, so one engine can be shared across
    threads.
"""

from .cover import CoverGraph, Lift, build_cover
from .errors import (
    ConfigurationError,
    ContextError,
    DtCoverError,
    GraphDomainError,
    MissingBaseError,
    MissingDataError,
    ReductionError,
    SeriesDomainError,
    UnsupportedError,
)
from .families import FAMILIES, family_graph
from .graph import (
    CurveClass,
    DualGraph,
    Edge,
    LoopClass,
    Vertex,
    class_arith,
    classify,
    cycle_basis,
    genus,
)
from .invariants import (
    GeometryKind,
    GvTable,
    TableBaseProvider,
    WeightKind,
    base_chain,
    euler_variant_rigid_m1m1,
    multiple_cover_eval,
    type_IN_closed_form,
    vanishing_rules,
)
from .parabolic import (
    IDENTITIES,
    DtParTable,
    check_log_form,
    descent_dtpar_check,
    dt_hat,
    dt_hat_by_log,
    dt_par_from_gv,
    telescoping_check,
)
from .reduction import ReductionEngine, descent_N1, reduce_and_compute
from .registry import Registry, register
from .series import FormalSeries, gv_product_side, series_exp, series_log, series_mul

__version__ = "0.1.0"
__all__ = [
    "ConfigurationError",
    "ContextError",
    "CoverGraph",
    "CurveClass",
    "DtCoverError",
    "DtParTable",
    "DualGraph",
    "Edge",
    "FAMILIES",
    "FormalSeries",
    "GeometryKind",
    "GraphDomainError",
    "GvTable",
    "IDENTITIES",
    "Lift",
    "LoopClass",
    "MissingBaseError",
    "MissingDataError",
    "ReductionEngine",
    "ReductionError",
    "Registry",
    "SeriesDomainError",
    "TableBaseProvider",
    "UnsupportedError",
    "Vertex",
    "WeightKind",
    "base_chain",
    "build_cover",
    "check_log_form",
    "class_arith",
    "classify",
    "cycle_basis",
    "descent_N1",
    "descent_dtpar_check",
    "dt_hat",
    "dt_hat_by_log",
    "dt_par_from_gv",
    "euler_variant_rigid_m1m1",
    "family_graph",
    "genus",
    "gv_product_side",
    "multiple_cover_eval",
    "reduce_and_compute",
    "register",
    "series_exp",
    "series_log",
    "series_mul",
    "telescoping_check",
    "type_IN_closed_form",
    "vanishing_rules",
]
