"""
Tests for the reduction.py module: the cover reduction and its certificates.
"""

# mypy: ignore-errors

from fractions import Fraction

import pytest

from dtcover.errors import GraphDomainError, MissingBaseError, UnsupportedError
from dtcover.families import chain_graph, cycle_graph, d_tree
from dtcover.graph import CurveClass, ShapeKind, classify, genus
from dtcover.invariants import (
    ChainBaseProvider,
    ChainedProvider,
    GeometryKind,
    Provenance,
    TableBaseProvider,
    WeightKind,
    type_IN_closed_form,
)
from dtcover.reduction import (
    CRITICAL_LOCUS,
    ReductionEngine,
    descent_N1,
    reduce_and_compute,
)

KINDS = [GeometryKind.SUPER_RIGID, GeometryKind.SURFACE_TYPE]


def _walk(step):
    yield step
    for child in step.children:
        yield from _walk(child)


def _zero_off_chains(graph, gamma, n, kind, weight):
    if classify(graph, gamma).kind in (ShapeKind.ADE_TREE, ShapeKind.GENERAL_TREE):
        return Fraction(0)
    return None


class TestTypeIN:
    """The reduction against the closed form on Kodaira cycles."""

    @pytest.mark.parametrize("kind", KINDS)
    @pytest.mark.parametrize("N", [1, 2, 3])
    @pytest.mark.parametrize("m", [1, 2, 3])
    def test_closed_form(self, kind, N, m) -> None:
        """
        Scenario: N_{n, m(C_1 + ... + C_N)} on I_N for n in -4..4

        Expected:
        - The reduction reproduces +-sum_{k | (n, m)} N / k^2
        """
        graph = cycle_graph(N)
        gamma = graph.class_from_vector([m] * N)
        engine = ReductionEngine(kind)
        for n in range(-4, 5):
            value = engine.evaluate(graph, gamma, n).value
            assert value == type_IN_closed_form(N, m, n, kind), (N, m, n)

    def test_surface_example(self) -> None:
        """
        Scenario: N_{0,(3,3)} on I_2 of surface type

        Expected:
        - -(2 + 2/9) = -20/9
        """
        graph = cycle_graph(2)
        evaluation = reduce_and_compute(
            graph, CurveClass({"c1": 3, "c2": 3}), 0, GeometryKind.SURFACE_TYPE
        )
        assert evaluation.value == Fraction(-20, 9)


class TestReductionEngine:
    """Tests for ReductionEngine."""

    def test_nodal_curve(self, i1, twice_c, rigid_engine) -> None:
        """
        Scenario: N_{0,2C} on a rigid nodal rational curve

        Expected:
        - N_1 = 1 for C and 2C, so N_0 = 1 + 1/4
        - The certificate lists both divisor terms
        """
        evaluation = rigid_engine.evaluate(i1, twice_c, 0)
        assert evaluation.value == Fraction(5, 4)
        certificate = evaluation.certificate
        assert certificate.rule == "multiple-cover"
        assert certificate.terms == ((1, Fraction(1)), (2, Fraction(1)))
        assert certificate.assumptions == (CRITICAL_LOCUS,)

    def test_certificate_tree(self, i1, twice_c, rigid_engine) -> None:
        """
        Scenario: The reduction step for N_{1,2C} on I_1

        Expected:
        - One descent through the 3-fold cover cut at e1
        - Two lift orbits of size three, landing on chains
        - Every trace goes (l=1, g=1) to a tree
        """
        step = rigid_engine.n1_step(i1, twice_c)
        assert step.rule == "descent"
        assert (step.m, step.cut_edge) == (3, "e1")
        assert sorted(lift.orbit_size for lift in step.lifts) == [3, 3]
        assert sorted(lift.value for lift in step.lifts) == [0, 1]
        assert step.depth() == 1
        assert sorted(map(tuple, step.paths())) == [((1, 1), (1, 0)), ((1, 1), (2, 0))]
        payload = step.to_dict()
        assert payload["value"] == "1"
        assert len(payload["children"]) == 2

    def test_cache_reuses_steps(self, i2, rigid_engine) -> None:
        gamma = CurveClass({"c1": 2, "c2": 2})
        first = rigid_engine.n1_step(i2, gamma)
        size = rigid_engine.cache_size()
        assert size > 1
        assert rigid_engine.n1_step(i2, gamma) is first
        assert rigid_engine.cache_size() == size

    def test_subgraph_support_is_a_tree(self, i2, rigid_engine) -> None:
        """
        Scenario: A class on I_2 supported on one component

        Expected:
        - Evaluated as a chain base case, no descent
        """
        evaluation = rigid_engine.evaluate(i2, CurveClass({"c1": 2}), 2)
        assert evaluation.value == Fraction(1, 4)
        assert evaluation.certificate.rule == "base"

    def test_disconnected_support(self, rigid_engine) -> None:
        graph = cycle_graph(4)
        evaluation = rigid_engine.evaluate(graph, CurveClass({"c1": 1, "c3": 1}), 0)
        assert evaluation.value == 0
        assert evaluation.certificate.rule == "vanishing:disconnected"
        assert evaluation.certificate.note == "disconnected support"

    def test_gv_table(self, i2, rigid_engine) -> None:
        """
        Scenario: GV table of I_2 up to degree 2

        Expected:
        - Tree classes are closed forms, the rest come from descent
        """
        table = rigid_engine.gv_table(i2, 2)
        assert table.value(CurveClass({"c1": 1})) == 1
        assert table.value(CurveClass({"c1": 2})) == 0
        assert table.value(CurveClass({"c1": 1, "c2": 1})) == 2
        assert table.provenance(CurveClass({"c1": 1})) is Provenance.CLOSED_FORM
        assert table.provenance(CurveClass({"c1": 1, "c2": 1})) is Provenance.DESCENT

    def test_missing_base(self, rigid_engine) -> None:
        """
        Scenario: A D_4 tree with no closed form and no user value

        Expected:
        - MissingBaseError naming the tree
        """
        tree = d_tree(4)
        with pytest.raises(MissingBaseError, match="D4"):
            rigid_engine.evaluate(tree, tree.class_from_vector([1, 1, 1, 1]), 0)

    def test_user_base_value(self) -> None:
        tree = d_tree(4)
        gamma = tree.class_from_vector([1, 1, 1, 1])
        provider = TableBaseProvider.from_classes(tree, [(gamma, None, Fraction(-3))])
        evaluation = reduce_and_compute(
            tree, gamma, 0, GeometryKind.SUPER_RIGID, base_provider=provider
        )
        assert evaluation.value == -3

    def test_theta_graph(self, theta, rigid_engine) -> None:
        """
        Scenario: The primitive class (1, 1) on two curves meeting three times

        Expected:
        - Lifts on an I_2 and on a chain give 3, for either cut loop
        """
        gamma = CurveClass({"u": 1, "v": 1})
        assert rigid_engine.n1(theta, gamma) == 3
        other = ReductionEngine(GeometryKind.SUPER_RIGID, loop_index=1)
        assert other.n1(theta, gamma) == 3

    def test_two_node_curve(self, two_node, rigid_engine) -> None:
        assert rigid_engine.n1(two_node, CurveClass({"x": 1})) == 1


class TestEulerWeights:
    """Euler-weighted evaluation on super-rigid curves."""

    def test_single_curve(self, a1, twice_c) -> None:
        engine = ReductionEngine(GeometryKind.SUPER_RIGID, WeightKind.EULER)
        evaluation = engine.evaluate(a1, twice_c, 0)
        assert evaluation.value == Fraction(-1, 4)
        assert evaluation.certificate.rule == "euler-(-1,-1)-curve"
        assert evaluation.certificate.assumptions == ()

    def test_non_primitive_nodal_curve(self, i1, twice_c) -> None:
        """
        Scenario: Euler weight, super-rigid, non-primitive class at n = 0

        Expected:
        - UnsupportedError, the multiple cover formula is known to fail
        """
        engine = ReductionEngine(GeometryKind.SUPER_RIGID, WeightKind.EULER)
        with pytest.raises(UnsupportedError):
            engine.evaluate(i1, twice_c, 0)


class TestDescentN1:
    """Tests for descent_N1 and the termination of the reduction."""

    def test_connected_and_all_lifts_agree(self, i1, i2, twice_c) -> None:
        """
        Scenario: Descent restricted to connected lifts and over every lift

        Expected:
        - Disconnected lifts contribute 0, so the values agree
        """
        for graph, gamma in ((i1, twice_c), (i2, CurveClass({"c1": 2, "c2": 1}))):
            for kind in KINDS:
                assert descent_N1(graph, gamma, kind) == descent_N1(
                    graph, gamma, kind, connected_only=False
                )

    def test_disconnected_support(self) -> None:
        graph = cycle_graph(4)
        gamma = CurveClass({"c1": 1, "c3": 2})
        assert descent_N1(graph, gamma, GeometryKind.SUPER_RIGID) == 0

    def test_tree_support(self) -> None:
        with pytest.raises(GraphDomainError, match="positive genus"):
            descent_N1(chain_graph(2), CurveClass({"c1": 1, "c2": 1}), GeometryKind.SUPER_RIGID)

    @pytest.mark.parametrize("kind", KINDS)
    def test_termination_sweep(self, multigraphs, kind) -> None:
        """
        Scenario: Every connected class of degree <= 4 on every connected
        multigraph with at most three components and genus at most 2

        Expected:
        - The reduction finishes within d + g levels
        - (-l, g) strictly decreases along every parent-child edge
        - Every leaf is a tree or a forced zero
        """
        provider = ChainedProvider(ChainBaseProvider(), _zero_off_chains)
        engine = ReductionEngine(kind, provider=provider)
        for graph in multigraphs(3, 2):
            for gamma in graph.classes_up_to(4):
                sub = graph.support_graph(gamma)
                if not sub.connected:
                    continue
                root = engine.n1_step(graph, gamma)
                assert root.depth() <= gamma.degree + genus(sub), (graph, gamma)
                for step in _walk(root):
                    for child in step.children:
                        assert child.lex < step.lex
                    if not step.children:
                        assert step.genus in (0, None)
