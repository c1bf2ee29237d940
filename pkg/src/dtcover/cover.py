"""
Cyclic covers of dual graphs.

Cutting a loop of the dual graph at one edge and gluing ``m`` copies of the
result end to end gives the m-fold cyclic cover: vertex ``(v, i)`` is named
``"v.i"`` and edge ``(e, i)`` (named ``"e.i"``) joins ``tail.i`` to
``head.(i + c(e))`` where the cocycle ``c`` is 1 on the cut edge and 0
elsewhere. The deck group Z/m shifts every sheet index.

The lifted divisor H~ lives on a single sheet (``h_sheet``, 0 by default):
cover vertices inherit ``h_deg`` on that sheet and get 0 elsewhere.
"""

import logging
from dataclasses import dataclass, field
from itertools import product
from typing import Dict, FrozenSet, Iterator, List, Mapping, Set, Tuple

import networkx as nx

from .errors import GraphDomainError
from .graph import CurveClass, DualGraph, Edge, LoopClass, Vertex, compositions

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Lift:
    """A lifted class; ``orbit_size`` counts its deck orbit when reduced."""

    cls: CurveClass
    orbit_size: int = 1


def sheet_id(base_id: str, sheet: int) -> str:
    return f"{base_id}.{sheet}"


@dataclass(frozen=True, eq=False)
class CoverGraph:
    base: DualGraph
    loop: LoopClass
    m: int
    graph: DualGraph
    cocycle: Mapping[str, int]
    projection: Mapping[str, Tuple[str, int]] = field(repr=False)
    h_sheet: int = 0

    def fiber(self, base_id: str) -> List[str]:
        return [sheet_id(base_id, i) for i in range(self.m)]

    def translate(self, cls: CurveClass, shift: int) -> CurveClass:
        """Deck action ``(v, i) -> (v, i + shift)`` on a cover class."""
        moved: Dict[str, int] = {}
        for vertex, multiplicity in cls.items():
            base_id, sheet = self.projection[vertex]
            moved[sheet_id(base_id, (sheet + shift) % self.m)] = multiplicity
        return CurveClass(moved)

    def pushforward(self, cls: CurveClass) -> CurveClass:
        """sigma_* : sum each fibre."""
        pushed: Dict[str, int] = {}
        for vertex, multiplicity in cls.items():
            try:
                base_id, _ = self.projection[vertex]
            except KeyError:
                raise GraphDomainError(f"{vertex!r} is not a vertex of the cover")
            pushed[base_id] = pushed.get(base_id, 0) + multiplicity
        return CurveClass(pushed)

    def lift_h_pairing(self, cls: CurveClass) -> int:
        """gamma~ . H~, only the H-sheet contributes."""
        return self.graph.h_pairing(cls)

    def enumerate_lifts(
        self,
        gamma: CurveClass,
        connected_only: bool = False,
        up_to_deck: bool = False,
    ) -> List[Lift]:
        """All cover classes pushing forward to ``gamma``, canonically sorted."""
        self.base.check_class(gamma)
        if gamma.is_zero():
            return [Lift(CurveClass.zero(), 1)]
        if connected_only:
            classes = list(self._connected_lifts(gamma))
        else:
            classes = list(self._all_lifts(gamma))
        if up_to_deck:
            lifts = self._orbit_representatives(classes)
        else:
            lifts = [Lift(cls) for cls in classes]
        lifts.sort(key=lambda lift: lift.cls.sort_key())
        log.debug(
            "%d lifts of %s to the %d-fold cover (connected_only=%s, up_to_deck=%s)",
            len(lifts),
            gamma.label(),
            self.m,
            connected_only,
            up_to_deck,
        )
        return lifts

    def _all_lifts(self, gamma: CurveClass) -> Iterator[CurveClass]:
        vertex_ids = [v for v, _ in gamma.items()]
        per_vertex = [list(compositions(a, self.m)) for _, a in gamma.items()]
        for choice in product(*per_vertex):
            coefficients: Dict[str, int] = {}
            for base_id, parts in zip(vertex_ids, choice):
                for sheet, multiplicity in enumerate(parts):
                    if multiplicity:
                        coefficients[sheet_id(base_id, sheet)] = multiplicity
            yield CurveClass(coefficients)

    def _connected_lifts(self, gamma: CurveClass) -> Iterator[CurveClass]:
        for support in self._connected_supports(gamma):
            fibres: Dict[str, List[str]] = {}
            for vertex in sorted(support):
                fibres.setdefault(self.projection[vertex][0], []).append(vertex)
            base_ids = list(fibres)
            options = [
                list(_positive_compositions(gamma[v], len(fibres[v]))) for v in base_ids
            ]
            for choice in product(*options):
                coefficients: Dict[str, int] = {}
                for base_id, parts in zip(base_ids, choice):
                    coefficients.update(zip(fibres[base_id], parts))
                yield CurveClass(coefficients)

    def _connected_supports(self, gamma: CurveClass) -> List[FrozenSet[str]]:
        """Connected vertex sets projecting onto supp(gamma), fibre sizes <= a_v.

        Enumerated with the ESU scheme: every connected set is grown exactly
        once from its smallest vertex.
        """
        caps = dict(gamma.items())
        allowed = [w for w in self.graph.vertex_ids if self.projection[w][0] in caps]
        index = {w: i for i, w in enumerate(allowed)}
        adjacency: Dict[str, Set[str]] = {w: set() for w in allowed}
        for edge in self.graph.edges:
            if edge.tail in index and edge.head in index and not edge.is_loop:
                adjacency[edge.tail].add(edge.head)
                adjacency[edge.head].add(edge.tail)
        needed = set(caps)
        max_size = gamma.degree
        found: List[FrozenSet[str]] = []

        def extend(
            sub: FrozenSet[str],
            counts: Dict[str, int],
            extension: List[str],
            seed: int,
        ) -> None:
            if set(counts) == needed:
                found.append(sub)
            if len(sub) == max_size:
                return
            neighbourhood = set(sub).union(*(adjacency[w] for w in sub))
            pending = list(extension)
            while pending:
                w = pending.pop()
                base_id = self.projection[w][0]
                if counts.get(base_id, 0) >= caps[base_id]:
                    continue
                exclusive = [
                    u
                    for u in sorted(adjacency[w], key=index.__getitem__)
                    if index[u] > seed and u not in neighbourhood and u not in pending
                ]
                grown = dict(counts)
                grown[base_id] = grown.get(base_id, 0) + 1
                extend(sub | {w}, grown, pending + exclusive, seed)

        for w in allowed:
            start = [u for u in sorted(adjacency[w], key=index.__getitem__) if index[u] > index[w]]
            extend(frozenset({w}), {self.projection[w][0]: 1}, start, index[w])
        return found

    def _orbit_representatives(self, classes: List[CurveClass]) -> List[Lift]:
        seen: Set[CurveClass] = set()
        representatives = []
        for cls in classes:
            if cls in seen:
                continue
            orbit = {self.translate(cls, shift) for shift in range(self.m)}
            seen.update(orbit)
            representative = min(orbit, key=CurveClass.sort_key)
            representatives.append(Lift(representative, len(orbit)))
        return representatives


def _positive_compositions(total: int, parts: int) -> Iterator[Tuple[int, ...]]:
    for parts_minus_one in compositions(total - parts, parts):
        yield tuple(p + 1 for p in parts_minus_one)


def _check_loop(graph: DualGraph, loop: LoopClass) -> None:
    for edge_id in loop.edge_ids:
        graph.edge(edge_id)
    if loop.cut_edge not in loop.edge_ids:
        raise GraphDomainError(f"cut edge {loop.cut_edge!r} is not on the loop")
    cut = graph.edge(loop.cut_edge)
    remainder = graph.nx_graph.copy()
    remainder.remove_edge(cut.tail, cut.head, key=cut.id)
    if not nx.is_connected(remainder):
        raise GraphDomainError(f"removing {cut.id!r} disconnects the graph")


def build_cover(
    graph: DualGraph, loop: LoopClass, m: int, h_sheet: int = 0
) -> CoverGraph:
    """m-fold cyclic cover of ``graph`` cut along ``loop``."""
    if m < 1:
        raise GraphDomainError(f"covering degree must be >= 1, got {m}")
    _check_loop(graph, loop)
    cocycle = {edge.id: int(edge.id == loop.cut_edge) for edge in graph.edges}
    projection: Dict[str, Tuple[str, int]] = {}
    vertices = []
    for sheet in range(m):
        for vertex in graph.vertices:
            vertex_id = sheet_id(vertex.id, sheet)
            projection[vertex_id] = (vertex.id, sheet)
            vertices.append(
                Vertex(
                    vertex_id,
                    omega_deg=vertex.omega_deg,
                    h_deg=vertex.h_deg if sheet == h_sheet % m else 0,
                    rational=vertex.rational,
                )
            )
    edges = [
        Edge(
            sheet_id(edge.id, sheet),
            sheet_id(edge.tail, sheet),
            sheet_id(edge.head, (sheet + cocycle[edge.id]) % m),
        )
        for sheet in range(m)
        for edge in graph.edges
    ]
    cover = CoverGraph(
        base=graph,
        loop=loop,
        m=m,
        graph=DualGraph.build(vertices, edges),
        cocycle=cocycle,
        projection=projection,
        h_sheet=h_sheet % m,
    )
    log.debug("built %d-fold cover of %s cut at %s", m, graph.summary(), loop.cut_edge)
    return cover
