"""Levels of an expanded Markov sequence and their decompositions."""

from enum import Enum
from functools import cached_property
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field

from markovkit.models.complex import ColoredGraph, GraphPoint, QuasiSimplicialMap, Violation
from markovkit.models.diagram import Role


class CellKind(str, Enum):
    VERTEX = "vertex"
    EDGE = "edge"


def node_key(kind: CellKind | str, cell: str) -> str:
    """Assembly-graph node name for a cell of the base level."""
    return f"{CellKind(kind).value}:{cell}"


class EdgeAssignment(BaseModel):
    model_config = ConfigDict(frozen=True)

    production: str
    tail: str
    head: str


class Assignment(BaseModel):
    """Production assigned to every cell of one level."""

    model_config = ConfigDict(frozen=True)

    vertices: dict[str, str] = Field(default_factory=dict)
    edges: dict[str, EdgeAssignment] = Field(default_factory=dict)


class AssemblyArc(BaseModel):
    model_config = ConfigDict(frozen=True)

    source: str = Field(description="Vertex node key")
    target: str = Field(description="Edge node key")
    gluing: str
    role: Role


class AssemblyGraph(BaseModel):
    """Incidence graph of a level labeled with productions (nodes) and gluings (arcs)."""

    model_config = ConfigDict(frozen=True)

    nodes: dict[str, str] = Field(default_factory=dict, description="node key -> production")
    arcs: list[AssemblyArc] = Field(default_factory=list)


class ChartEntry(BaseModel):
    """Top and bottom embeddings of one assembly node."""

    model_config = ConfigDict(frozen=True)

    node: str
    kind: CellKind
    cell: str
    production: str
    top: dict[str, str] = Field(description="top vertex -> vertex of the finer level")
    bottom: dict[str, str] = Field(description="bottom vertex -> vertex of the coarser level")


class Chart(BaseModel):
    model_config = ConfigDict(frozen=True)

    entries: list[ChartEntry] = Field(default_factory=list)

    @cached_property
    def by_node(self) -> dict[str, ChartEntry]:
        return {entry.node: entry for entry in self.entries}


class Decomposition(BaseModel):
    """How the bonding map onto the previous level decomposes over the diagram."""

    model_config = ConfigDict(frozen=True)

    assembly: AssemblyGraph
    chart: Chart
    bonding: QuasiSimplicialMap


class LevelState(BaseModel):
    """Graph ``K_n``; from level 2 on it also carries the decomposition of ``K_n -> K_{n-1}``."""

    model_config = ConfigDict(frozen=True)

    index: int = Field(ge=1)
    graph: ColoredGraph
    decomposition: Optional[Decomposition] = None


class DecompositionVerdict(BaseModel):
    level: int
    ok: bool
    violations: list[Violation] = Field(default_factory=list)


class ProjectionMap(BaseModel):
    """Composite of bonding maps from ``source_level`` down to ``target_level``.

    Images are points of the coarser graph; they are vertices of its
    ``source_level - target_level`` times iterated barycentric subdivision, so
    edge offsets are dyadic.
    """

    source_level: int
    target_level: int
    images: dict[str, GraphPoint]

    @property
    def subdivision_depth(self) -> int:
        return self.source_level - self.target_level
