"""Colored graphs, subdivision points and vertex maps."""

from enum import Enum
from fractions import Fraction
from functools import cached_property
from typing import Annotated, Any, Literal, Optional

import networkx as nx
from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    PlainSerializer,
    PlainValidator,
    WithJsonSchema,
    field_validator,
    model_serializer,
    model_validator,
)


def _to_fraction(value: Any) -> Fraction:
    if isinstance(value, bool):
        raise ValueError("booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, (str, float)):
        try:
            return Fraction(str(value))
        except (ValueError, ZeroDivisionError) as e:
            raise ValueError(f"not a rational number: {value!r}") from e
    raise ValueError(f"not a rational number: {value!r}")


# Exact rational arithmetic for every metric value; serialized as "p/q" text.
Rational = Annotated[
    Fraction,
    PlainValidator(_to_fraction),
    PlainSerializer(str, return_type=str, when_used="json"),
    WithJsonSchema({"type": "string", "description": "rational number p/q"}),
]

Color = Annotated[int, Field(ge=0, description="Color from the diagram palette")]


class Violation(BaseModel):
    """One failed condition with the identifiers that witness it."""

    code: str
    message: str
    witness: list[str] = Field(default_factory=list)


class ValidationResult(BaseModel):
    """Outcome of a structural check."""

    ok: bool
    violations: list[Violation] = Field(default_factory=list)

    @classmethod
    def from_violations(cls, violations: list[Violation]) -> "ValidationResult":
        return cls(ok=not violations, violations=violations)


class Vertex(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    id: str
    color: Color = 0


class Edge(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    id: str
    ends: tuple[str, str]
    color: Color = 0


class ColoredGraph(BaseModel):
    """Finite 1-dimensional colored simplicial complex.

    Vertices and edges are kept sorted by identifier so every traversal is
    deterministic. Structural invariants (no dangling endpoints, no loops, no
    multi-edges, unique identifiers) are checked by ``ComplexOps.validate_graph``
    rather than on construction, so broken inputs can be reported.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    vertices: tuple[Vertex, ...] = ()
    edges: tuple[Edge, ...] = ()

    @field_validator("vertices", "edges", mode="after")
    @classmethod
    def _sorted_by_id(cls, cells: tuple) -> tuple:
        return tuple(sorted(cells, key=lambda cell: cell.id))

    @classmethod
    def build(
        cls,
        vertices: dict[str, int] | list[str],
        edges: Optional[list[tuple[str, str, str] | tuple[str, str, str, int]]] = None,
    ) -> "ColoredGraph":
        """Build from ``{id: color}`` (or plain ids) and ``(id, a, b[, color])`` tuples."""
        if not isinstance(vertices, dict):
            vertices = {v: 0 for v in vertices}
        edge_cells = []
        for item in edges or []:
            edge_id, a, b = item[0], item[1], item[2]
            color = item[3] if len(item) > 3 else 0
            edge_cells.append(Edge(id=edge_id, ends=(a, b), color=color))
        return cls(
            vertices=tuple(Vertex(id=v, color=c) for v, c in vertices.items()),
            edges=tuple(edge_cells),
        )

    @cached_property
    def vertex_colors(self) -> dict[str, int]:
        return {v.id: v.color for v in self.vertices}

    @cached_property
    def edge_map(self) -> dict[str, Edge]:
        return {e.id: e for e in self.edges}

    @cached_property
    def pair_index(self) -> dict[frozenset[str], str]:
        """Unordered endpoint pair -> edge id (first edge wins on duplicates)."""
        index: dict[frozenset[str], str] = {}
        for e in self.edges:
            index.setdefault(frozenset(e.ends), e.id)
        return index

    @cached_property
    def vertex_ids(self) -> list[str]:
        return [v.id for v in self.vertices]

    @cached_property
    def edge_ids(self) -> list[str]:
        return [e.id for e in self.edges]

    @cached_property
    def nx_graph(self) -> nx.Graph:
        graph = nx.Graph()
        for v in self.vertices:
            graph.add_node(v.id, color=v.color)
        for e in self.edges:
            graph.add_edge(e.ends[0], e.ends[1], color=e.color, id=e.id)
        return graph

    def has_vertex(self, vertex: str) -> bool:
        return vertex in self.vertex_colors

    def edge_between(self, a: str, b: str) -> Optional[str]:
        return self.pair_index.get(frozenset((a, b)))

    @property
    def is_single_vertex(self) -> bool:
        return len(self.vertices) == 1 and not self.edges

    @property
    def is_single_edge(self) -> bool:
        return len(self.vertices) == 2 and len(self.edges) == 1

    @property
    def counts(self) -> tuple[int, int]:
        return len(self.vertices), len(self.edges)


class PointKind(str, Enum):
    VERTEX = "vertex"
    BARY = "bary"


class SubdivisionPoint(BaseModel):
    """A vertex of the barycentric subdivision: an original vertex or an edge barycenter.

    Written in text form as ``v:<vertex id>`` or ``bary:<edge id>``.
    """

    model_config = ConfigDict(frozen=True)

    kind: PointKind
    cell: str

    @model_validator(mode="before")
    @classmethod
    def _from_text(cls, data: Any) -> Any:
        if isinstance(data, str):
            prefix, sep, cell = data.partition(":")
            if not sep or not cell or prefix not in ("v", "bary"):
                raise ValueError(f"map target must be 'v:<id>' or 'bary:<id>', got {data!r}")
            return {"kind": PointKind.VERTEX if prefix == "v" else PointKind.BARY, "cell": cell}
        return data

    @model_serializer
    def _to_text(self) -> str:
        return str(self)

    def __str__(self) -> str:
        prefix = "v" if self.kind is PointKind.VERTEX else "bary"
        return f"{prefix}:{self.cell}"

    @classmethod
    def vertex(cls, cell: str) -> "SubdivisionPoint":
        return cls(kind=PointKind.VERTEX, cell=cell)

    @classmethod
    def barycenter(cls, cell: str) -> "SubdivisionPoint":
        return cls(kind=PointKind.BARY, cell=cell)

    @property
    def is_vertex(self) -> bool:
        return self.kind is PointKind.VERTEX


class Subdivision(BaseModel):
    """Barycentric subdivision together with the point each new vertex stands for."""

    model_config = ConfigDict(frozen=True)

    graph: ColoredGraph
    points: dict[str, SubdivisionPoint]


class MapClass(str, Enum):
    INVALID = "invalid"
    SIMPLICIAL = "simplicial"
    QUASI_SIMPLICIAL = "quasiSimplicial"
    BOTH = "both"
    # full edges in some charts, half edges in others; only meaningful for bonding maps
    MIXED = "mixed"


class EdgeShape(str, Enum):
    DEGENERATE = "degenerate"
    HALF = "half"
    FULL = "full"
    INVALID = "invalid"


class QuasiSimplicialMap(BaseModel):
    """Vertex assignment into the barycentric subdivision of the codomain."""

    model_config = ConfigDict(frozen=True)

    domain: ColoredGraph
    codomain: ColoredGraph
    vertex_image: dict[str, SubdivisionPoint]


class MapClassification(BaseModel):
    classification: MapClass
    is_simplicial: bool
    is_quasi_simplicial: bool
    edge_shapes: dict[str, EdgeShape] = Field(default_factory=dict)
    violations: list[Violation] = Field(default_factory=list)

    @property
    def valid(self) -> bool:
        return self.classification is not MapClass.INVALID


class ColoredEmbedding(BaseModel):
    """Vertex map between colored graphs; edges follow from the vertex map."""

    model_config = ConfigDict(frozen=True)

    domain: ColoredGraph
    codomain: ColoredGraph
    vertex_map: dict[str, str]

    def edge_image(self, edge_id: str) -> Optional[str]:
        edge = self.domain.edge_map[edge_id]
        a, b = (self.vertex_map.get(end) for end in edge.ends)
        if a is None or b is None:
            return None
        return self.codomain.edge_between(a, b)


class GeodesicScale(BaseModel):
    model_config = ConfigDict(frozen=True)

    kappa: Rational

    @field_validator("kappa")
    @classmethod
    def _positive(cls, kappa: Fraction) -> Fraction:
        if kappa <= 0:
            raise ValueError("kappa must be positive")
        return kappa


class GraphPoint(BaseModel):
    """A point of a graph: a vertex, or a rational position along an edge.

    ``offset`` runs from 0 at ``ends[0]`` to 1 at ``ends[1]`` of the edge.
    """

    model_config = ConfigDict(frozen=True)

    kind: Literal["vertex", "edge"]
    cell: str
    offset: Rational = Fraction(0)

    def __str__(self) -> str:
        if self.kind == "vertex":
            return self.cell
        return f"{self.cell}@{self.offset}"
