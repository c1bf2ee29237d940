"""
Built-in curve configurations.

``FAMILIES`` maps a name to a graph constructor taking the family size:
``I`` (Kodaira cycle I_N), ``A`` (chain), ``D`` and ``E`` (ADE trees),
``theta`` (two components meeting in three nodes) and ``two-node`` (an
irreducible rational curve with two nodes). ``family_graph("I3")`` parses
the size suffix. Every vertex gets ``omega_deg = 1`` and ``h_deg = 1``.
"""

import re
from typing import Callable, List

from .errors import ConfigurationError
from .graph import DualGraph, Edge, Vertex
from .registry import Registry

FamilyBuilder = Callable[[int], DualGraph]

FAMILIES: Registry[FamilyBuilder] = Registry("families")

_NAME_RE = re.compile(r"^([A-Za-z-]+?)(\d*)$")


def _vertices(count: int, prefix: str = "c") -> List[Vertex]:
    return [Vertex(f"{prefix}{i}", h_deg=1) for i in range(1, count + 1)]


@FAMILIES.register("I")
def cycle_graph(size: int) -> DualGraph:
    """Type I_N: N rational curves in a circle (N = 1: one self-node)."""
    if size < 1:
        raise ConfigurationError("I_N needs N >= 1")
    vertices = _vertices(size)
    edges = [
        Edge(f"e{i}", vertices[i - 1].id, vertices[i % size].id)
        for i in range(1, size + 1)
    ]
    return DualGraph.build(vertices, edges)


@FAMILIES.register("A")
def chain_graph(size: int) -> DualGraph:
    if size < 1:
        raise ConfigurationError("A_N needs N >= 1")
    vertices = _vertices(size)
    edges = [
        Edge(f"e{i}", vertices[i - 1].id, vertices[i].id) for i in range(1, size)
    ]
    return DualGraph.build(vertices, edges)


def _star(branches: List[int]) -> DualGraph:
    vertices = [Vertex("c0", h_deg=1)]
    edges = []
    for b, length in enumerate(branches, start=1):
        previous = "c0"
        for step in range(1, length + 1):
            vertex_id = f"b{b}_{step}"
            vertices.append(Vertex(vertex_id, h_deg=1))
            edges.append(Edge(f"e{b}_{step}", previous, vertex_id))
            previous = vertex_id
    return DualGraph.build(vertices, edges)


@FAMILIES.register("D")
def d_tree(size: int) -> DualGraph:
    if size < 4:
        raise ConfigurationError("D_N needs N >= 4")
    return _star([1, 1, size - 3])


@FAMILIES.register("E")
def e_tree(size: int) -> DualGraph:
    if size not in (6, 7, 8):
        raise ConfigurationError("E_N needs N in {6, 7, 8}")
    return _star([1, 2, size - 4])


@FAMILIES.register("star")
def star_tree(size: int) -> DualGraph:
    """A centre meeting ``size`` leaves (size = 4 is the m = 10 exception)."""
    return _star([1] * size)


@FAMILIES.register("theta")
def theta_graph(size: int = 3) -> DualGraph:
    """Two components meeting in ``size`` nodes; genus size - 1."""
    vertices = [Vertex("u", h_deg=1), Vertex("v", h_deg=1)]
    edges = [Edge(f"e{i}", "u", "v") for i in range(1, size + 1)]
    return DualGraph.build(vertices, edges)


@FAMILIES.register("two-node")
def two_node_curve(size: int = 2) -> DualGraph:
    """Irreducible rational curve with ``size`` self-nodes."""
    vertices = [Vertex("x", h_deg=1)]
    edges = [Edge(f"e{i}", "x", "x") for i in range(1, size + 1)]
    return DualGraph.build(vertices, edges)


def family_graph(name: str) -> DualGraph:
    """Build a family from a name such as ``I3``, ``A2``, ``E6`` or ``theta``."""
    match = _NAME_RE.match(name.strip())
    if match is None:
        raise ConfigurationError(f"cannot parse family name {name!r}")
    key, size = match.group(1), match.group(2)
    try:
        builder = FAMILIES.get(key)
    except KeyError as error:
        raise ConfigurationError(str(error))
    return builder(int(size)) if size else builder(_DEFAULT_SIZES.get(key, 1))


_DEFAULT_SIZES = {"theta": 3, "two-node": 2, "star": 4}
