"""Verdicts of the hypothesis checkers and the certificate that bundles them."""

from typing import Literal, Optional

from pydantic import BaseModel, Field

from markovkit.models.complex import Violation
from markovkit.models.metrics import MetricSummary

Pairing = Literal["straight", "crossed"]
Letter = Literal["A", "B"]


class BiconnectivityResult(BaseModel):
    biconnected: bool
    connected: bool
    articulation_points: list[str] = Field(default_factory=list)


class ConnectivityVerdict(BaseModel):
    """Hypotheses of the k = 0 connectedness theorem."""

    hypotheses_hold: bool
    failures: list[Violation] = Field(default_factory=list)
    conclusion: Literal["connected+locallyConnected", "noConclusion"]
    # "gluedStar" only when no level can contain an isolated vertex
    vertex_tops: Literal["literal", "gluedStar"] = "literal"


class PairingFeasibility(BaseModel):
    """Which A/B pairings admit disjoint monotone paths inside one edge-production top."""

    production: str
    tail_gluing: str
    head_gluing: str
    straight: bool
    crossed: bool
    straight_paths: Optional[tuple[list[str], list[str]]] = None
    crossed_paths: Optional[tuple[list[str], list[str]]] = None


class SectionSummary(BaseModel):
    level: int
    ok: bool
    pairings_used: dict[str, int] = Field(default_factory=dict)
    detail: str = ""


class DapVerdict(BaseModel):
    """Hypotheses of the disjoint arcs theorem."""

    elementary: bool
    vertex_productions_canonical: bool
    edge_tops_connected: bool
    edge_tops_biconnected: bool
    conclusion: Literal["DAP", "noConclusion"]
    failures: list[Violation] = Field(default_factory=list)
    section_witness: list[SectionSummary] = Field(default_factory=list)


class SectionPair(BaseModel):
    """Two disjoint sections ``f, g: K_i -> K_{i+1}`` of the bonding map.

    Vertex maps send a base vertex to a vertex of its fiber; path maps send a
    base edge (read from its tail to its head) to a path of the finer level.
    """

    level: int
    fiber_choice: dict[str, Letter]
    f_vertices: dict[str, str]
    g_vertices: dict[str, str]
    f_paths: dict[str, list[str]]
    g_paths: dict[str, list[str]]
    pairings: dict[str, Pairing] = Field(default_factory=dict)
    feasibility: list[PairingFeasibility] = Field(default_factory=list)


class SectionCheck(BaseModel):
    level: int
    ok: bool
    violations: list[Violation] = Field(default_factory=list)


class CompactnessFacts(BaseModel):
    levels_finite: bool
    depth: int
    level_counts: list[tuple[int, int]]
    at_least_two_points: bool


CertificateLabel = Literal["MengerCurve", "propertiesList", "inconclusive"]


class Certificate(BaseModel):
    """Machine-readable verdict for one diagram. Stored as ``.mcert``."""

    schema_version: str
    tool_version: str
    diagram_name: str
    diagram_hash: str
    depth: int
    connectivity: ConnectivityVerdict
    dap: DapVerdict
    facts: CompactnessFacts
    label: CertificateLabel
    properties: list[str] = Field(default_factory=list)
    metrics: Optional[MetricSummary] = None
    issued_at: Optional[str] = None
