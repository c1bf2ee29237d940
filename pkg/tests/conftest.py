"""
Configuration for pytest tests for the dtcover package.
"""

# mypy: ignore-errors

from functools import lru_cache
from itertools import combinations_with_replacement
from typing import Callable, Generator, Tuple

import networkx as nx
import pytest

from dtcover import CurveClass, DualGraph, GeometryKind, ReductionEngine
from dtcover.graph import Edge, Vertex
from dtcover.families import chain_graph, cycle_graph, theta_graph, two_node_curve


@pytest.fixture
def i1() -> DualGraph:
    """
    Fixture for a nodal rational curve (Kodaira type I_1).

    Returns:
        DualGraph: one vertex ``c1`` with a self-loop ``e1``
    """
    return cycle_graph(1)


@pytest.fixture
def i2() -> DualGraph:
    return cycle_graph(2)


@pytest.fixture
def i3() -> DualGraph:
    return cycle_graph(3)


@pytest.fixture
def a1() -> DualGraph:
    """
    Fixture for a single smooth rational curve.

    Returns:
        DualGraph: one vertex ``c1`` and no edges
    """
    return chain_graph(1)


@pytest.fixture
def theta() -> DualGraph:
    """Two components meeting in three nodes (genus 2)."""
    return theta_graph(3)


@pytest.fixture
def two_node() -> DualGraph:
    """Irreducible rational curve with two nodes (genus 2)."""
    return two_node_curve(2)


@pytest.fixture
def rigid_engine() -> Generator[ReductionEngine, None, None]:
    """
    Fixture for an engine on 0-super rigid curves with Behrend weights.

    Returns:
        ReductionEngine: a fresh engine with an empty cache
    """
    engine = ReductionEngine(GeometryKind.SUPER_RIGID)
    yield engine


@pytest.fixture
def surface_engine() -> Generator[ReductionEngine, None, None]:
    engine = ReductionEngine(GeometryKind.SURFACE_TYPE)
    yield engine


@pytest.fixture
def twice_c() -> CurveClass:
    """The class 2[c1]."""
    return CurveClass({"c1": 2})


@lru_cache(maxsize=None)
def _multigraphs(vertex_count: int, genus: int) -> Tuple[DualGraph, ...]:
    ids = [f"c{i}" for i in range(1, vertex_count + 1)]
    slots = list(combinations_with_replacement(range(vertex_count), 2))
    found = []
    for chosen in combinations_with_replacement(slots, vertex_count - 1 + genus):
        graph = DualGraph.build(
            [Vertex(v, h_deg=1) for v in ids],
            [Edge(f"e{k}", ids[i], ids[j]) for k, (i, j) in enumerate(chosen, start=1)],
        )
        if not graph.connected:
            continue
        if any(nx.is_isomorphic(graph.nx_graph, other.nx_graph) for other in found):
            continue
        found.append(graph)
    return tuple(found)


@pytest.fixture(scope="session")
def multigraphs() -> Callable[[int, int], Tuple[DualGraph, ...]]:
    """
    Fixture enumerating connected dual graphs up to isomorphism.

    Returns:
        Callable: ``(max_vertices, max_genus)`` to every connected multigraph
        with at most that many vertices and that genus, loops and multiple
        edges included, each component meeting H once
    """

    def enumerate_graphs(max_vertices: int, max_genus: int) -> Tuple[DualGraph, ...]:
        return tuple(
            graph
            for vertex_count in range(1, max_vertices + 1)
            for g in range(max_genus + 1)
            for graph in _multigraphs(vertex_count, g)
        )

    return enumerate_graphs
