"""Productions, gluings and Markov diagrams."""

from enum import Enum
from functools import cached_property
from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator

from markovkit.models.complex import (
    Color,
    ColoredGraph,
    MapClass,
    QuasiSimplicialMap,
    SubdivisionPoint,
    ValidationResult,
    Violation,
)

Role = Literal["tail", "head"]
ROLES: tuple[Role, Role] = ("tail", "head")


def _sorted_mapping(value: dict) -> dict:
    return dict(sorted(value.items()))


class ProductionKind(str, Enum):
    VERTEX = "VertexProduction"
    EDGE = "EdgeProduction"
    GENERAL = "GeneralProduction"
    UNSUPPORTED = "Unsupported"


class PaletteEntry(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    id: Color
    name: str
    style: str = Field(default="solid", description="DOT style used when exporting")


class Production(BaseModel):
    """A rewrite rule: a (quasi-)simplicial map from the top graph onto the bottom graph."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    name: str
    top: ColoredGraph
    bottom: ColoredGraph
    map: dict[str, SubdivisionPoint] = Field(
        description="top vertex -> point of the subdivided bottom"
    )
    general: bool = Field(
        default=False, description="Declares a bottom that is neither a vertex nor an edge"
    )

    @field_validator("map", mode="after")
    @classmethod
    def _map_sorted(cls, value: dict) -> dict:
        return _sorted_mapping(value)

    @cached_property
    def quasi_map(self) -> QuasiSimplicialMap:
        return QuasiSimplicialMap(domain=self.top, codomain=self.bottom, vertex_image=self.map)

    @property
    def kind(self) -> ProductionKind:
        if self.bottom.is_single_vertex:
            return ProductionKind.VERTEX
        if self.bottom.is_single_edge:
            return ProductionKind.EDGE
        return ProductionKind.GENERAL if self.general else ProductionKind.UNSUPPORTED

    @property
    def bottom_edge(self) -> Optional[str]:
        """The bottom edge id of an edge production."""
        return self.bottom.edges[0].id if self.kind is ProductionKind.EDGE else None

    def endpoint(self, role: Role) -> str:
        """Bottom vertex playing ``role``; the stored edge order is (tail, head)."""
        edge = self.bottom.edges[0]
        return edge.ends[0] if role == "tail" else edge.ends[1]

    def role_of(self, bottom_vertex: str) -> Optional[Role]:
        if self.kind is not ProductionKind.EDGE:
            return None
        for role in ROLES:
            if self.endpoint(role) == bottom_vertex:
                return role
        return None


class Gluing(BaseModel):
    """Pair of colored embeddings identifying the top and bottom of ``src`` inside ``dst``."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    name: str
    src: str
    dst: str
    top_map: dict[str, str]
    bottom_map: dict[str, str]

    @field_validator("top_map", "bottom_map", mode="after")
    @classmethod
    def _maps_sorted(cls, value: dict) -> dict:
        return _sorted_mapping(value)


class MarkovDiagram(BaseModel):
    """Starting graph, productions and gluings, in canonical (sorted) order.

    This model is also the wire form of a diagram document; see ``docs/FORMAT.md``.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    name: str
    palette: tuple[PaletteEntry, ...] = ()
    start: ColoredGraph
    productions: tuple[Production, ...] = ()
    gluings: tuple[Gluing, ...] = ()
    notes: tuple[str, ...] = ()

    @field_validator("palette", mode="after")
    @classmethod
    def _palette_sorted(cls, entries: tuple) -> tuple:
        return tuple(sorted(entries, key=lambda entry: entry.id))

    @field_validator("productions", "gluings", mode="after")
    @classmethod
    def _sorted_by_name(cls, items: tuple) -> tuple:
        return tuple(sorted(items, key=lambda item: item.name))

    @cached_property
    def production_map(self) -> dict[str, Production]:
        return {p.name: p for p in self.productions}

    @cached_property
    def gluing_map(self) -> dict[str, Gluing]:
        return {g.name: g for g in self.gluings}

    def production(self, name: str) -> Production:
        return self.production_map[name]

    def gluings_between(self, src: str, dst: str) -> list[Gluing]:
        return [g for g in self.gluings if g.src == src and g.dst == dst]

    @property
    def palette_ids(self) -> set[int]:
        return {entry.id for entry in self.palette}


# A parsed document is a MarkovDiagram; the alias names its role at the I/O boundary.
DiagramDocument = MarkovDiagram


class ProductionVerdict(BaseModel):
    name: str
    ok: bool
    kind: ProductionKind
    classification: MapClass
    violations: list[Violation] = Field(default_factory=list)


class GluingVerdict(BaseModel):
    name: str
    ok: bool
    role: Optional[Role] = Field(
        default=None, description="Endpoint of the destination bottom edge hit by bottom_map"
    )
    violations: list[Violation] = Field(default_factory=list)


class CoverageRow(BaseModel):
    """One color signature with the production matched to it."""

    signature: str
    production: Optional[str] = None
    candidates: list[str] = Field(default_factory=list)
    gluings: dict[str, list[str]] = Field(
        default_factory=dict, description="'<vertex production>@<role>' -> matching gluings"
    )


class DiagramReport(BaseModel):
    """Full structural report for a diagram. Pure function of the diagram."""

    name: str
    start: ValidationResult
    palette: ValidationResult
    references: ValidationResult
    productions: dict[str, ProductionVerdict] = Field(default_factory=dict)
    gluings: dict[str, GluingVerdict] = Field(default_factory=dict)
    elementary: bool
    coverage_checked: bool = False
    coverage: list[CoverageRow] = Field(default_factory=list)
    missing: list[Violation] = Field(default_factory=list)
    ambiguous: list[Violation] = Field(default_factory=list)

    @property
    def valid(self) -> bool:
        return (
            self.start.ok
            and self.palette.ok
            and self.references.ok
            and all(v.ok for v in self.productions.values())
            and all(v.ok for v in self.gluings.values())
        )

    @property
    def complete(self) -> bool:
        return self.coverage_checked and not self.missing and not self.ambiguous

    @property
    def expandable(self) -> bool:
        return self.valid and self.elementary and self.complete

    def failures(self) -> list[Violation]:
        """Every violation in the report, in a stable order."""
        found = [*self.start.violations, *self.palette.violations, *self.references.violations]
        for verdict in self.productions.values():
            found.extend(verdict.violations)
        for verdict in self.gluings.values():
            found.extend(verdict.violations)
        return [*found, *self.missing, *self.ambiguous]
