"""
Dual graphs of nodal rational curve configurations.

A nodal curve ``C = C_1 u ... u C_N`` with rational components is recorded
by its dual graph: one vertex per component, one edge per node. Self-loops
are irreducible components with a self-node; parallel edges are components
meeting in several nodes. Each vertex carries the two intersection numbers
the engine needs, ``omega_deg = omega . C_i`` (for slopes) and
``h_deg = H . C_i`` (for parabolic pairs), plus a ``rational`` flag used by
the higher-genus vanishing rule.

Curve classes ``gamma = sum a_i [C_i]`` are ``CurveClass`` values, keyed by
vertex id. Edges are oriented ``tail -> head``; for a self-loop the
orientation fixes which of the two branches through the node is the tail
half-edge.

Example:
    >>> g = DualGraph.build([Vertex("x", h_deg=1)], [Edge("e", "x", "x")])
    >>> genus(g)
    1
    >>> [loop.cut_edge for loop in cycle_basis(g)]
    ['e']
"""

import enum
import logging
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import (
    Dict,
    FrozenSet,
    Iterable,
    Iterator,
    List,
    Mapping,
    Optional,
    Sequence,
    Tuple,
)

import networkx as nx

from .arith import divisors, gcd_all, natural_key
from .errors import ConfigurationError, GraphDomainError

log = logging.getLogger(__name__)


class CurveClass:
    """Non-negative multidegree ``sum a_v [C_v]``, immutable and hashable."""

    __slots__ = ("_coefficients", "_hash")

    def __init__(self, coefficients: Optional[Mapping[str, int]] = None):
        clean: Dict[str, int] = {}
        for vertex, multiplicity in (coefficients or {}).items():
            multiplicity = int(multiplicity)
            if multiplicity < 0:
                raise GraphDomainError(
                    f"negative multiplicity {multiplicity} on {vertex!r}"
                )
            if multiplicity:
                clean[str(vertex)] = multiplicity
        self._coefficients = dict(
            sorted(clean.items(), key=lambda item: natural_key(item[0]))
        )
        self._hash = hash(frozenset(self._coefficients.items()))

    @classmethod
    def zero(cls) -> "CurveClass":
        return cls()

    def __getitem__(self, vertex: str) -> int:
        return self._coefficients.get(vertex, 0)

    def items(self) -> List[Tuple[str, int]]:
        return list(self._coefficients.items())

    @property
    def support(self) -> FrozenSet[str]:
        return frozenset(self._coefficients)

    @property
    def degree(self) -> int:
        """d(gamma), the total multidegree."""
        return sum(self._coefficients.values())

    @property
    def length(self) -> int:
        """l(gamma), the number of components in the support."""
        return len(self._coefficients)

    @property
    def gcd(self) -> int:
        return gcd_all(self._coefficients.values())

    def is_zero(self) -> bool:
        return not self._coefficients

    def scale(self, factor: int) -> "CurveClass":
        return CurveClass({v: a * factor for v, a in self._coefficients.items()})

    def divide(self, factor: int) -> "CurveClass":
        if factor <= 0 or any(a % factor for a in self._coefficients.values()):
            raise GraphDomainError(f"{self.label()} is not divisible by {factor}")
        return CurveClass({v: a // factor for v, a in self._coefficients.items()})

    def is_divisible_by(self, factor: int) -> bool:
        return all(a % factor == 0 for a in self._coefficients.values())

    def __add__(self, other: "CurveClass") -> "CurveClass":
        merged = dict(self._coefficients)
        for vertex, multiplicity in other._coefficients.items():
            merged[vertex] = merged.get(vertex, 0) + multiplicity
        return CurveClass(merged)

    def __sub__(self, other: "CurveClass") -> "CurveClass":
        merged = dict(self._coefficients)
        for vertex, multiplicity in other._coefficients.items():
            merged[vertex] = merged.get(vertex, 0) - multiplicity
        return CurveClass(merged)

    def __le__(self, other: "CurveClass") -> bool:
        return all(a <= other[v] for v, a in self._coefficients.items())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CurveClass):
            return NotImplemented
        return self._coefficients == other._coefficients

    def __hash__(self) -> int:
        return self._hash

    def sort_key(self) -> Tuple:
        return (
            self.degree,
            tuple((natural_key(v), a) for v, a in self._coefficients.items()),
        )

    def label(self) -> str:
        """Human form, e.g. ``2[x.0]+[x.1]``; the zero class is ``0``."""
        if not self._coefficients:
            return "0"
        return "+".join(
            f"[{v}]" if a == 1 else f"{a}[{v}]" for v, a in self._coefficients.items()
        )

    def to_dict(self) -> Dict[str, int]:
        return dict(self._coefficients)

    def __repr__(self) -> str:
        return f"CurveClass({self._coefficients!r})"


@dataclass(frozen=True)
class Vertex:
    """An irreducible component: a P^1 with its intersection degrees."""

    id: str
    omega_deg: int = 1
    h_deg: int = 0
    rational: bool = True

    def __post_init__(self) -> None:
        if self.omega_deg < 1:
            raise ConfigurationError(f"vertex {self.id!r}: omega_deg must be >= 1")
        if self.h_deg < 0:
            raise ConfigurationError(f"vertex {self.id!r}: h_deg must be >= 0")


@dataclass(frozen=True)
class Edge:
    """A node, oriented ``tail -> head``; ``tail == head`` is a self-node."""

    id: str
    tail: str
    head: str

    @property
    def is_loop(self) -> bool:
        return self.tail == self.head


@dataclass(frozen=True)
class LoopClass:
    """Oriented closed walk ``((edge_id, +1 | -1), ...)`` with its cut edge.

    The cut edge is a non-tree edge of a spanning tree, so removing it keeps
    the graph connected.
    """

    steps: Tuple[Tuple[str, int], ...]
    cut_edge: str

    @property
    def edge_ids(self) -> Tuple[str, ...]:
        return tuple(edge_id for edge_id, _ in self.steps)

    def vertex_ids(self, graph: "DualGraph") -> FrozenSet[str]:
        vertices = set()
        for edge_id in self.edge_ids:
            edge = graph.edge(edge_id)
            vertices.update((edge.tail, edge.head))
        return frozenset(vertices)

    def __len__(self) -> int:
        return len(self.steps)


@dataclass(frozen=True)
class DualGraph:
    """Decorated multigraph of a nodal rational curve configuration."""

    vertices: Tuple[Vertex, ...]
    edges: Tuple[Edge, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        ids = [vertex.id for vertex in self.vertices]
        if len(set(ids)) != len(ids):
            raise ConfigurationError(f"duplicate vertex ids in {ids}")
        edge_ids = [edge.id for edge in self.edges]
        if len(set(edge_ids)) != len(edge_ids):
            raise ConfigurationError(f"duplicate edge ids in {edge_ids}")
        known = set(ids)
        for edge in self.edges:
            if edge.tail not in known or edge.head not in known:
                raise ConfigurationError(
                    f"edge {edge.id!r} references unknown vertex "
                    f"({edge.tail!r}, {edge.head!r})"
                )

    @classmethod
    def build(cls, vertices: Iterable[Vertex], edges: Iterable[Edge] = ()) -> "DualGraph":
        return cls(tuple(vertices), tuple(edges))

    @cached_property
    def _vertex_map(self) -> Dict[str, Vertex]:
        return {vertex.id: vertex for vertex in self.vertices}

    @cached_property
    def _edge_map(self) -> Dict[str, Edge]:
        return {edge.id: edge for edge in self.edges}

    @cached_property
    def nx_graph(self) -> nx.MultiGraph:
        """networkx view; edge keys are edge ids, ``order`` is the input index."""
        graph = nx.MultiGraph()
        graph.add_nodes_from(vertex.id for vertex in self.vertices)
        for order, edge in enumerate(self.edges):
            graph.add_edge(edge.tail, edge.head, key=edge.id, order=order)
        return graph

    @cached_property
    def connected(self) -> bool:
        return bool(self.vertices) and nx.is_connected(self.nx_graph)

    @property
    def vertex_ids(self) -> List[str]:
        return [vertex.id for vertex in self.vertices]

    @property
    def delta_c(self) -> int:
        """Number of irreducible components."""
        return len(self.vertices)

    @property
    def delta_n(self) -> int:
        """Number of nodes."""
        return len(self.edges)

    def vertex(self, vertex_id: str) -> Vertex:
        try:
            return self._vertex_map[vertex_id]
        except KeyError:
            raise GraphDomainError(f"unknown vertex {vertex_id!r}")

    def edge(self, edge_id: str) -> Edge:
        try:
            return self._edge_map[edge_id]
        except KeyError:
            raise GraphDomainError(f"unknown edge {edge_id!r}")

    def check_class(self, gamma: CurveClass) -> None:
        unknown = gamma.support - set(self._vertex_map)
        if unknown:
            raise GraphDomainError(f"class {gamma.label()} uses unknown {sorted(unknown)}")

    def induced(self, support: Iterable[str]) -> "DualGraph":
        """Subgraph on ``support`` with every edge whose ends both lie in it."""
        keep = set(support)
        return DualGraph(
            tuple(vertex for vertex in self.vertices if vertex.id in keep),
            tuple(
                edge for edge in self.edges if edge.tail in keep and edge.head in keep
            ),
        )

    def support_graph(self, gamma: CurveClass) -> "DualGraph":
        self.check_class(gamma)
        return self.induced(gamma.support)

    def h_pairing(self, gamma: CurveClass) -> int:
        """gamma . H"""
        return sum(a * self.vertex(v).h_deg for v, a in gamma.items())

    def omega_pairing(self, gamma: CurveClass) -> int:
        """gamma . omega"""
        return sum(a * self.vertex(v).omega_deg for v, a in gamma.items())

    def class_from_vector(self, multiplicities: Sequence[int]) -> CurveClass:
        if len(multiplicities) != len(self.vertices):
            raise ConfigurationError(
                f"expected {len(self.vertices)} multiplicities, got "
                f"{len(multiplicities)}"
            )
        return CurveClass(dict(zip(self.vertex_ids, multiplicities)))

    def classes_up_to(self, max_degree: int) -> Iterator[CurveClass]:
        """All nonzero classes with d(gamma) <= max_degree, by degree."""
        ids = self.vertex_ids
        for degree in range(1, max_degree + 1):
            for vector in compositions(degree, len(ids)):
                yield CurveClass(dict(zip(ids, vector)))

    def classes_below(self, ceiling: CurveClass) -> Iterator[CurveClass]:
        """All nonzero classes ``beta <= ceiling`` componentwise."""
        ids = [v for v, _ in ceiling.items()]
        ranges = [range(a + 1) for _, a in ceiling.items()]
        for vector in product(*ranges):
            beta = CurveClass(dict(zip(ids, vector)))
            if not beta.is_zero():
                yield beta

    def summary(self) -> str:
        return f"{self.delta_c} components, {self.delta_n} nodes"


class ShapeKind(enum.Enum):
    CHAIN = "chain"
    CYCLE = "cycle"
    ADE_TREE = "ade-tree"
    GENERAL_TREE = "general-tree"
    HIGHER_GENUS = "higher-genus"
    DISCONNECTED = "disconnected"


@dataclass(frozen=True)
class CurveShape:
    """Result of ``classify``: the kind plus its size and a Dynkin/Kodaira label."""

    kind: ShapeKind
    size: int
    label: str

    @property
    def is_tree(self) -> bool:
        return self.kind in (ShapeKind.CHAIN, ShapeKind.ADE_TREE, ShapeKind.GENERAL_TREE)


@dataclass(frozen=True)
class ClassArithmetic:
    degree: int
    length: int
    gcd_gamma: int
    gcd_n_gamma: int
    is_primitive: bool
    divisors: Tuple[int, ...]


def compositions(total: int, parts: int) -> Iterator[Tuple[int, ...]]:
    """Ordered tuples of ``parts`` non-negative integers summing to ``total``."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


def genus(graph: DualGraph) -> int:
    """Arithmetic genus ``delta_n - delta_c + 1`` of a connected configuration."""
    if not graph.connected:
        raise GraphDomainError(
            "genus is only defined on connected graphs; split into components first"
        )
    return graph.delta_n - graph.delta_c + 1


def cycle_basis(graph: DualGraph) -> List[LoopClass]:
    """One loop per non-tree edge of a deterministic spanning tree."""
    if not graph.connected:
        raise GraphDomainError("cycle_basis needs a connected graph")
    tree_keys = {
        key
        for _, _, key in nx.minimum_spanning_edges(
            graph.nx_graph, algorithm="kruskal", weight="order", keys=True, data=False
        )
    }
    tree = nx.Graph()
    tree.add_nodes_from(graph.vertex_ids)
    for edge in graph.edges:
        if edge.id in tree_keys:
            tree.add_edge(edge.tail, edge.head, id=edge.id)

    loops = []
    for edge in graph.edges:
        if edge.id in tree_keys:
            continue
        steps = [(edge.id, 1)]
        path = nx.shortest_path(tree, edge.head, edge.tail)
        for start, end in zip(path, path[1:]):
            tree_edge = graph.edge(tree[start][end]["id"])
            steps.append((tree_edge.id, 1 if tree_edge.tail == start else -1))
        loops.append(LoopClass(tuple(steps), edge.id))
    log.debug("cycle basis: %d loops on %s", len(loops), graph.summary())
    return loops


def _branch_lengths(tree: nx.MultiGraph, center: str) -> List[int]:
    lengths = []
    for neighbour in tree.neighbors(center):
        previous, current, length = center, neighbour, 1
        while True:
            onward = [w for w in tree.neighbors(current) if w != previous]
            if not onward:
                break
            previous, current, length = current, onward[0], length + 1
        lengths.append(length)
    return sorted(lengths)


_E_SHAPES = {(1, 2, 2): "E6", (1, 2, 3): "E7", (1, 2, 4): "E8"}


def classify(graph: DualGraph, support: CurveClass) -> CurveShape:
    """Shape of the subgraph induced by ``supp(support)``."""
    if support.is_zero():
        raise GraphDomainError("classify needs a nonempty support")
    sub = graph.support_graph(support)
    size = sub.delta_c
    if not sub.connected:
        return CurveShape(ShapeKind.DISCONNECTED, size, "disconnected")
    g = genus(sub)
    degrees = dict(sub.nx_graph.degree())
    if g > 0:
        if g == 1 and all(d == 2 for d in degrees.values()):
            return CurveShape(ShapeKind.CYCLE, size, f"I{size}")
        return CurveShape(ShapeKind.HIGHER_GENUS, size, f"genus {g}")
    if max(degrees.values(), default=0) <= 2:
        return CurveShape(ShapeKind.CHAIN, size, f"A{size}")
    branching = [v for v, d in degrees.items() if d >= 3]
    if len(branching) == 1 and degrees[branching[0]] == 3:
        lengths = tuple(_branch_lengths(sub.nx_graph, branching[0]))
        if lengths[:2] == (1, 1):
            return CurveShape(ShapeKind.ADE_TREE, size, f"D{size}")
        if lengths in _E_SHAPES:
            return CurveShape(ShapeKind.ADE_TREE, size, _E_SHAPES[lengths])
    return CurveShape(ShapeKind.GENERAL_TREE, size, "tree")


def class_arith(gamma: CurveClass, n: int) -> ClassArithmetic:
    """gcds, primitivity and the divisor set ``k | (n, gamma)``."""
    if gamma.is_zero():
        raise GraphDomainError("class arithmetic is undefined for gamma = 0")
    gcd_gamma = gamma.gcd
    gcd_n_gamma = gcd_all((gcd_gamma, n))
    return ClassArithmetic(
        degree=gamma.degree,
        length=gamma.length,
        gcd_gamma=gcd_gamma,
        gcd_n_gamma=gcd_n_gamma,
        is_primitive=gcd_gamma == 1,
        divisors=tuple(divisors(gcd_n_gamma)),
    )


def support_is_connected(graph: DualGraph, gamma: CurveClass) -> bool:
    return not gamma.is_zero() and graph.support_graph(gamma).connected


def tree_signature(graph: DualGraph, gamma: CurveClass) -> str:
    """Isomorphism-invariant signature of (supp gamma, multiplicities) on a tree.

    Colour refinement separates non-isomorphic trees, so equal signatures
    identify the same base case no matter how cover vertices are named.
    """
    sub = graph.support_graph(gamma)
    labelled = nx.Graph()
    for vertex in sub.vertices:
        labelled.add_node(vertex.id, label=f"{gamma[vertex.id]}:{int(vertex.rational)}")
    for edge in sub.edges:
        labelled.add_edge(edge.tail, edge.head)
    return nx.weisfeiler_lehman_graph_hash(
        labelled, node_attr="label", iterations=max(3, sub.delta_c)
    )
