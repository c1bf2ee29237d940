"""
JSON curve configurations.

A configuration file looks like::

    {
      "name": "I2 of surface type",
      "graph": {
        "vertices": [{"id": "a", "h_deg": 1}, {"id": "b", "h_deg": 1, "omega_deg": 2}],
        "edges": [["a", "b"], {"id": "n2", "tail": "b", "head": "a"}]
      },
      "geometry": "surface-type",
      "weight": "behrend",
      "base_table": [{"gamma": "1,1", "n": 0, "value": "-1"}]
    }

Rationals are ``"p/q"`` strings (plain integers are accepted). ``gamma`` is
either a comma list in vertex order or an object ``{vertex: multiplicity}``.
Every problem is reported as a ``ConfigurationError``.
"""

import json
import logging
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import IO, Any, List, Mapping, Optional, Tuple, Union

from .arith import parse_rational
from .errors import ConfigurationError, GraphDomainError
from .families import family_graph
from .graph import CurveClass, DualGraph, Edge, Vertex
from .invariants import GeometryKind, TableBaseProvider, WeightKind

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class BaseRow:
    gamma: CurveClass
    n: Optional[int]
    value: Fraction


@dataclass(frozen=True)
class CurveConfig:
    graph: DualGraph
    kind: GeometryKind
    weight: WeightKind = WeightKind.BEHREND
    base_rows: Tuple[BaseRow, ...] = ()
    name: str = ""

    def provider(self) -> Optional[TableBaseProvider]:
        """User base values, or None when the file has no ``base_table``."""
        if not self.base_rows:
            return None
        return TableBaseProvider.from_classes(
            self.graph,
            [(row.gamma, row.n, row.value) for row in self.base_rows],
            self.kind,
            self.weight,
        )

    def with_weight(self, weight: WeightKind) -> "CurveConfig":
        return CurveConfig(self.graph, self.kind, weight, self.base_rows, self.name)

    def parse_class(self, value: Union[str, Mapping[str, Any]]) -> CurveClass:
        return parse_gamma(self.graph, value)


def _enum(enum_type: Any, text: Any, field_name: str) -> Any:
    try:
        return enum_type(text)
    except ValueError:
        choices = ", ".join(member.value for member in enum_type)
        raise ConfigurationError(f"{field_name} must be one of {choices}, got {text!r}")


def _int(value: Any, field_name: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigurationError(f"{field_name} must be an integer, got {value!r}")
    return value


def _vertex(raw: Any) -> Vertex:
    if not isinstance(raw, Mapping) or "id" not in raw:
        raise ConfigurationError(f"vertex entries need an 'id': {raw!r}")
    if "h_deg" not in raw:
        raise ConfigurationError(f"vertex {raw['id']!r} has no h_deg")
    rational = raw.get("rational", True)
    if not isinstance(rational, bool):
        raise ConfigurationError(f"vertex {raw['id']!r}: rational must be true or false")
    return Vertex(
        str(raw["id"]),
        omega_deg=_int(raw.get("omega_deg", 1), "omega_deg"),
        h_deg=_int(raw["h_deg"], "h_deg"),
        rational=rational,
    )


def _edge(raw: Any, position: int) -> Edge:
    if isinstance(raw, (list, tuple)) and len(raw) == 2:
        return Edge(f"e{position}", str(raw[0]), str(raw[1]))
    if isinstance(raw, Mapping) and {"tail", "head"} <= set(raw):
        return Edge(str(raw.get("id", f"e{position}")), str(raw["tail"]), str(raw["head"]))
    raise ConfigurationError(f"edge {position} must be [u, v] or {{tail, head}}: {raw!r}")


def parse_graph(raw: Any) -> DualGraph:
    if not isinstance(raw, Mapping) or "vertices" not in raw:
        raise ConfigurationError("graph needs a 'vertices' list")
    vertices = [_vertex(item) for item in raw["vertices"]]
    if not vertices:
        raise ConfigurationError("graph has no vertices")
    edges = [_edge(item, i) for i, item in enumerate(raw.get("edges", []), start=1)]
    return DualGraph.build(vertices, edges)


def parse_gamma(graph: DualGraph, value: Union[str, Mapping[str, Any]]) -> CurveClass:
    """``"2,0,1"`` in vertex order, or ``{"a": 2, "c": 1}``."""
    try:
        if isinstance(value, Mapping):
            gamma = CurveClass({str(v): _int(a, "multiplicity") for v, a in value.items()})
        elif isinstance(value, str):
            parts = [part.strip() for part in value.split(",") if part.strip()]
            gamma = graph.class_from_vector([int(part) for part in parts])
        else:
            raise ConfigurationError(f"cannot read a class from {value!r}")
        graph.check_class(gamma)
    except (ValueError, GraphDomainError) as error:
        if isinstance(error, ConfigurationError):
            raise
        raise ConfigurationError(f"bad class {value!r}: {error}")
    if gamma.is_zero():
        raise ConfigurationError(f"class {value!r} is zero")
    return gamma


def _base_rows(graph: DualGraph, rows: Any) -> Tuple[BaseRow, ...]:
    if not isinstance(rows, list):
        raise ConfigurationError("base_table must be a list")
    parsed: List[BaseRow] = []
    for row in rows:
        if not isinstance(row, Mapping) or "gamma" not in row or "value" not in row:
            raise ConfigurationError(f"base_table rows need gamma and value: {row!r}")
        n = row.get("n")
        parsed.append(
            BaseRow(
                parse_gamma(graph, row["gamma"]),
                None if n is None else _int(n, "n"),
                parse_rational(row["value"]),
            )
        )
    return tuple(parsed)


def parse_config(data: Any) -> CurveConfig:
    if not isinstance(data, Mapping):
        raise ConfigurationError("configuration must be a JSON object")
    for key in ("graph", "geometry"):
        if key not in data:
            raise ConfigurationError(f"configuration is missing {key!r}")
    graph = parse_graph(data["graph"])
    config = CurveConfig(
        graph=graph,
        kind=_enum(GeometryKind, data["geometry"], "geometry"),
        weight=_enum(WeightKind, data.get("weight", "behrend"), "weight"),
        base_rows=_base_rows(graph, data.get("base_table", [])),
        name=str(data.get("name", "")),
    )
    log.debug("parsed configuration %r: %s", config.name, graph.summary())
    return config


def load_config(source: Union[str, Path, IO[str]]) -> CurveConfig:
    """Read a configuration from a path or an open text stream."""
    try:
        if hasattr(source, "read"):
            data = json.load(source)  # type: ignore[arg-type]
        else:
            with open(source, encoding="utf-8") as handle:
                data = json.load(handle)
    except OSError as error:
        raise ConfigurationError(f"cannot read configuration: {error}")
    except json.JSONDecodeError as error:
        raise ConfigurationError(f"configuration is not valid JSON: {error}")
    return parse_config(data)


def config_from_family(
    name: str, kind: GeometryKind, weight: WeightKind = WeightKind.BEHREND
) -> CurveConfig:
    return CurveConfig(family_graph(name), kind, weight, name=name)
