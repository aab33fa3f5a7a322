"""Expansion of elementary Markov diagrams into levels with bonding maps."""

import logging
from collections import defaultdict
from itertools import combinations
from typing import Optional

from networkx.utils import UnionFind

from markovkit.errors import (
    DiagramInvalid,
    IndexOutOfRange,
    PreconditionFailed,
    UnintendedCollision,
)
from markovkit.models.complex import (
    ColoredEmbedding,
    ColoredGraph,
    Edge,
    GraphPoint,
    MapClass,
    QuasiSimplicialMap,
    SubdivisionPoint,
    Vertex,
    Violation,
)
from markovkit.models.diagram import ROLES, DiagramReport, Gluing, MarkovDiagram, Production
from markovkit.models.expansion import (
    AssemblyArc,
    AssemblyGraph,
    Assignment,
    CellKind,
    Chart,
    ChartEntry,
    Decomposition,
    DecompositionVerdict,
    EdgeAssignment,
    LevelState,
    ProjectionMap,
    node_key,
)
from markovkit.services.complex_ops import ComplexOps
from markovkit.services.diagram_checks import DiagramValidator, edge_signature, vertex_signature

logger = logging.getLogger(__name__)


def _address(parent: str, production: str, cell: str) -> str:
    return f"{parent}/{production}:{cell}"


def _translate(
    base: ColoredGraph, point: SubdivisionPoint, bottom: dict[str, str], production: Production
) -> Optional[SubdivisionPoint]:
    """Carry a point of the subdivided production bottom into the subdivided base level."""
    if point.is_vertex:
        target = bottom.get(point.cell)
        return SubdivisionPoint.vertex(target) if target is not None else None
    edge = production.bottom.edge_map.get(point.cell)
    if edge is None:
        return None
    a, b = (bottom.get(end) for end in edge.ends)
    image = base.edge_between(a, b) if a and b else None
    return SubdivisionPoint.barycenter(image) if image is not None else None


class _Cell:
    __slots__ = ("instance", "color", "image", "ends")

    def __init__(self, instance: str, color: int, image=None, ends=None):
        self.instance = instance
        self.color = color
        self.image = image
        self.ends = ends


class ExpansionEngine:
    """Expands one validated elementary diagram level by level."""

    def __init__(self, diagram: MarkovDiagram, report: Optional[DiagramReport] = None):
        self.diagram = diagram
        self.report = report or DiagramValidator.validate_diagram(diagram)
        if not self.report.expandable:
            reason = "diagram is not expandable"
            if not self.report.valid:
                reason = "diagram does not validate"
            elif not self.report.elementary:
                reason = "diagram is not elementary"
            elif not self.report.complete:
                reason = "diagram coverage is incomplete"
            raise DiagramInvalid(self.report, reason)

        self._signatures = {
            signature: names[0]
            for signature, names in DiagramValidator.signature_table(diagram).items()
            if len(names) == 1
        }
        self._gluings: dict[tuple[str, str, str], Gluing] = {
            key: diagram.gluing_map[names[0]]
            for key, names in DiagramValidator.gluing_roles(diagram).items()
            if len(names) == 1
        }

    def _lookup(self, signature: str) -> Production:
        name = self._signatures.get(signature)
        if name is None:
            raise PreconditionFailed(f"MissingProduction: {signature}")
        return self.diagram.production(name)

    def assign_productions(self, graph: ColoredGraph) -> Assignment:
        """
        Assign the matching production to every cell of a level.

        Args:
            graph: Level graph

        Returns:
            Assignment; edges also record which end plays the tail
        """
        colors = graph.vertex_colors
        vertices = {v.id: self._lookup(vertex_signature(v.color)).name for v in graph.vertices}
        edges = {}
        for e in graph.edges:
            a, b = e.ends
            ep = self._lookup(edge_signature(e.color, colors[a], colors[b]))
            tail, head = DiagramValidator.orient(ep, a, b, colors[a], colors[b])
            edges[e.id] = EdgeAssignment(production=ep.name, tail=tail, head=head)
        return Assignment(vertices=vertices, edges=edges)

    def expand_once(self, state: LevelState) -> LevelState:
        """
        Build the next level from ``state``.

        Every production top is instantiated over its cell with fresh addresses
        ``<cell>/<production>:<top cell>``; gluings then identify vertex-production
        instances with their images inside edge-production instances, and each
        identified class takes its least address as canonical name.

        Raises:
            UnintendedCollision: identifications beyond those the gluings require
        """
        base = state.graph
        assignment = self.assign_productions(base)
        uf = UnionFind()
        vertex_cells: dict[str, _Cell] = {}
        edge_cells: dict[str, _Cell] = {}
        entries: list[ChartEntry] = []
        arcs: list[AssemblyArc] = []
        nodes: dict[str, str] = {}

        def instantiate(kind: CellKind, cell: str, production: Production, bottom: dict[str, str]):
            instance = node_key(kind, cell)
            top: dict[str, str] = {}
            for t in production.top.vertices:
                address = _address(cell, production.name, t.id)
                image = _translate(base, production.map[t.id], bottom, production)
                vertex_cells[address] = _Cell(instance, t.color, image=image)
                uf[address]  # register singleton
                top[t.id] = address
            for te in production.top.edges:
                address = _address(cell, production.name, te.id)
                edge_cells[address] = _Cell(
                    instance, te.color, ends=(top[te.ends[0]], top[te.ends[1]])
                )
                uf[address]  # register singleton
            nodes[instance] = production.name
            entries.append(
                ChartEntry(
                    node=instance,
                    kind=kind,
                    cell=cell,
                    production=production.name,
                    top=top,
                    bottom=bottom,
                )
            )
            return top

        for v in base.vertices:
            vp = self.diagram.production(assignment.vertices[v.id])
            instantiate(CellKind.VERTEX, v.id, vp, {vp.bottom.vertex_ids[0]: v.id})

        for e in base.edges:
            placed = assignment.edges[e.id]
            ep = self.diagram.production(placed.production)
            ends = {"tail": placed.tail, "head": placed.head}
            bottom = {ep.endpoint(role): ends[role] for role in ROLES}
            top = instantiate(CellKind.EDGE, e.id, ep, bottom)

            for role in ROLES:
                w = ends[role]
                vp = self.diagram.production(assignment.vertices[w])
                gluing = self._gluings[(vp.name, ep.name, role)]
                for t, target in gluing.top_map.items():
                    uf.union(_address(w, vp.name, t), top[target])
                for te in vp.top.edges:
                    a, b = (gluing.top_map[end] for end in te.ends)
                    image = ep.top.edge_between(a, b)
                    uf.union(_address(w, vp.name, te.id), _address(e.id, ep.name, image))
                arcs.append(
                    AssemblyArc(
                        source=node_key(CellKind.VERTEX, w),
                        target=node_key(CellKind.EDGE, e.id),
                        gluing=gluing.name,
                        role=role,
                    )
                )

        canonical: dict[str, str] = {}
        classes: list[list[str]] = []
        for group in uf.to_sets():
            members = sorted(group)
            classes.append(members)
            for address in members:
                canonical[address] = members[0]

        vertices, edges, bonding = self._publish(
            base, classes, canonical, vertex_cells, edge_cells
        )
        graph = ColoredGraph(vertices=tuple(vertices), edges=tuple(edges))
        chart = Chart(
            entries=[
                entry.model_copy(
                    update={"top": {t: canonical[a] for t, a in entry.top.items()}}
                )
                for entry in entries
            ]
        )
        decomposition = Decomposition(
            assembly=AssemblyGraph(nodes=dict(sorted(nodes.items())), arcs=arcs),
            chart=chart,
            bonding=QuasiSimplicialMap(
                domain=graph, codomain=base, vertex_image=dict(sorted(bonding.items()))
            ),
        )
        logger.info(
            "Expanded %s level %d -> %d: %d vertices, %d edges",
            self.diagram.name,
            state.index,
            state.index + 1,
            len(graph.vertices),
            len(graph.edges),
        )
        return LevelState(index=state.index + 1, graph=graph, decomposition=decomposition)

    @staticmethod
    def _publish(
        base: ColoredGraph,
        classes: list[list[str]],
        canonical: dict[str, str],
        vertex_cells: dict[str, _Cell],
        edge_cells: dict[str, _Cell],
    ) -> tuple[list[Vertex], list[Edge], dict[str, SubdivisionPoint]]:
        vertices: list[Vertex] = []
        edges: list[Edge] = []
        bonding: dict[str, SubdivisionPoint] = {}
        pairs: dict[frozenset[str], str] = {}

        for members in classes:
            cells = vertex_cells if members[0] in vertex_cells else edge_cells
            instances = [cells[a].instance for a in members]
            if len(set(instances)) != len(instances):
                raise UnintendedCollision(members, "two cells of one instance were identified")
            if len({cells[a].color for a in members}) > 1:
                raise UnintendedCollision(members, "identified cells differ in color")
            rep = members[0]

            if cells is vertex_cells:
                images = {str(cells[a].image) for a in members}
                if len(images) != 1 or cells[rep].image is None:
                    raise UnintendedCollision(members, f"bonding images disagree: {sorted(images)}")
                vertices.append(Vertex(id=rep, color=cells[rep].color))
                bonding[rep] = cells[rep].image
                continue

            ends = {frozenset(canonical[x] for x in cells[a].ends) for a in members}
            if len(ends) != 1:
                raise UnintendedCollision(members, "identified edges have different endpoints")
            pair = ends.pop()
            if len(pair) != 2:
                raise UnintendedCollision(members, "gluing produced a self-loop")
            if pair in pairs:
                raise UnintendedCollision([pairs[pair], rep], "gluing produced a multi-edge")
            pairs[pair] = rep
            a, b = (canonical[x] for x in cells[rep].ends)
            edges.append(Edge(id=rep, ends=(a, b), color=cells[rep].color))

        return vertices, edges, bonding

    def expand(self, depth: int) -> list[LevelState]:
        """
        Expand from the start graph to ``depth`` levels.

        Args:
            depth: Number of levels, at least 1

        Returns:
            Levels ``K_1 .. K_depth``
        """
        if depth < 1:
            raise PreconditionFailed(f"depth must be at least 1, got {depth}")
        levels = [LevelState(index=1, graph=self.diagram.start)]
        while len(levels) < depth:
            levels.append(self.expand_once(levels[-1]))
        return levels

    @staticmethod
    def project(levels: list[LevelState], source: int, target: int) -> ProjectionMap:
        """
        Compose bonding maps from level ``source`` down to level ``target``.

        Raises:
            IndexOutOfRange: unless 1 <= target <= source <= len(levels)
        """
        if not 1 <= target <= source <= len(levels):
            raise IndexOutOfRange(
                f"projection {source} -> {target} outside levels 1..{len(levels)}"
            )
        images = {
            v: GraphPoint(kind="vertex", cell=v) for v in levels[source - 1].graph.vertex_ids
        }
        for index in range(source, target, -1):
            bonding = levels[index - 1].decomposition.bonding
            images = {v: ComplexOps.push_point(bonding, p) for v, p in images.items()}
        return ProjectionMap(source_level=source, target_level=target, images=images)


class DecompositionChecker:
    """Independent re-verification of a level's decomposition against the diagram."""

    def __init__(self, diagram: MarkovDiagram):
        self.diagram = diagram
        self._gluing_verdicts: dict[str, list[Violation]] = {}

    def _gluing_violations(self, name: str) -> list[Violation]:
        if name not in self._gluing_verdicts:
            gluing = self.diagram.gluing_map.get(name)
            if gluing is None:
                found = [
                    Violation(
                        code="UnknownReference",
                        message=f"unknown gluing '{name}'",
                        witness=[name],
                    )
                ]
            else:
                src = self.diagram.production_map.get(gluing.src)
                dst = self.diagram.production_map.get(gluing.dst)
                if src is None or dst is None:
                    found = [
                        Violation(
                            code="UnknownReference",
                            message=f"gluing '{name}' refers to an unknown production",
                            witness=[name],
                        )
                    ]
                else:
                    found = DiagramValidator.validate_gluing(gluing, src, dst).violations
            self._gluing_verdicts[name] = found
        return self._gluing_verdicts[name]

    @staticmethod
    def _image(
        graph: ColoredGraph, source: ColoredGraph, vertex_map: dict[str, str]
    ) -> frozenset:
        """Cells of ``graph`` covered by the image of ``source``."""
        cells = set(vertex_map.values())
        for e in source.edges:
            a, b = (vertex_map.get(end) for end in e.ends)
            image = graph.edge_between(a, b) if a and b else None
            if image is not None:
                cells.add(image)
        return frozenset(cells)

    @staticmethod
    def _closure(label: str, images: dict[str, frozenset]) -> list[Violation]:
        family = set(images.values())
        by_cell: dict[str, list[str]] = defaultdict(list)
        for node, cells in images.items():
            for cell in cells:
                by_cell[cell].append(node)
        pairs: set[tuple[str, str]] = set()
        for holders in by_cell.values():
            pairs.update(combinations(sorted(holders), 2))
        found = []
        for a, b in sorted(pairs):
            overlap = images[a] & images[b]
            if overlap not in family:
                found.append(
                    Violation(
                        code="NotClosedUnderIntersection",
                        message=f"{label} images of {a} and {b} meet in {sorted(overlap)}",
                        witness=[a, b],
                    )
                )
        return found

    def verify(self, base: ColoredGraph, state: LevelState) -> DecompositionVerdict:
        """
        Re-check a decomposition of the bonding map from ``state`` onto ``base``.

        Args:
            base: The coarser level
            state: The finer level carrying the decomposition

        Returns:
            DecompositionVerdict listing every failed condition with witnesses
        """
        violations: list[Violation] = []
        decomposition = state.decomposition
        if decomposition is None:
            return DecompositionVerdict(
                level=state.index,
                ok=False,
                violations=[
                    Violation(
                        code="MissingDecomposition",
                        message=f"level {state.index} carries no decomposition",
                    )
                ],
            )
        fine = state.graph
        bonding = decomposition.bonding
        chart = decomposition.chart.by_node

        classification = ComplexOps.classify_map(
            QuasiSimplicialMap(domain=fine, codomain=base, vertex_image=bonding.vertex_image),
            mixed_ok=True,
        )
        if classification.classification is MapClass.INVALID:
            violations.append(
                Violation(
                    code="BondingInvalid",
                    message="bonding map is neither simplicial nor quasi-simplicial",
                    witness=[w for v in classification.violations for w in v.witness][:10],
                )
            )

        top_images: dict[str, frozenset] = {}
        bottom_images: dict[str, frozenset] = {}
        for node, entry in chart.items():
            production = self.diagram.production_map.get(entry.production)
            if production is None:
                violations.append(
                    Violation(
                        code="UnknownReference",
                        message=f"chart {node} uses unknown production '{entry.production}'",
                        witness=[node],
                    )
                )
                continue
            for label, domain, codomain, vertex_map in (
                ("top", production.top, fine, entry.top),
                ("bottom", production.bottom, base, entry.bottom),
            ):
                check = ComplexOps.check_colored_embedding(
                    ColoredEmbedding(domain=domain, codomain=codomain, vertex_map=vertex_map)
                )
                for v in check.violations:
                    violations.append(
                        Violation(
                            code=v.code,
                            message=f"chart {node} {label}: {v.message}",
                            witness=[node, *v.witness],
                        )
                    )
            top_images[node] = self._image(fine, production.top, entry.top)
            bottom_images[node] = self._image(base, production.bottom, entry.bottom)

            for t in production.top.vertex_ids:
                finer = entry.top.get(t)
                expected = _translate(base, production.map[t], entry.bottom, production)
                actual = bonding.vertex_image.get(finer) if finer is not None else None
                if expected is None or actual != expected:
                    violations.append(
                        Violation(
                            code="NodeSquareFailure",
                            message=(
                                f"chart {node}: top vertex '{t}' lands on {actual} "
                                f"but the production sends it to {expected}"
                            ),
                            witness=[node, t],
                        )
                    )

            restricted = {
                t: bonding.vertex_image.get(entry.top.get(t, "")) for t in production.top.vertex_ids
            }
            if None not in restricted.values():
                on_chart = QuasiSimplicialMap(
                    domain=production.top, codomain=base, vertex_image=restricted
                )
                part = ComplexOps.classify_map(on_chart)
                if not part.valid:
                    violations.append(
                        Violation(
                            code="BondingInvalid",
                            message=(
                                f"bonding map on chart {node} is neither simplicial "
                                "nor quasi-simplicial"
                            ),
                            witness=[node],
                        )
                    )

        for label, graph, images in (("top", fine, top_images), ("bottom", base, bottom_images)):
            covered = set().union(*images.values()) if images else set()
            for cell in [*graph.vertex_ids, *graph.edge_ids]:
                if cell not in covered:
                    violations.append(
                        Violation(
                            code="CoverIncomplete",
                            message=f"{label} charts miss cell '{cell}'",
                            witness=[cell],
                        )
                    )
            violations.extend(self._closure(label, images))

        violations.extend(self._check_assembly(base, decomposition))
        violations.extend(self._check_arcs(decomposition))
        violations.extend(self._check_count(fine, decomposition))

        verdict = DecompositionVerdict(level=state.index, ok=not violations, violations=violations)
        logger.info("Decomposition of level %d: ok=%s", state.index, verdict.ok)
        return verdict

    def _check_assembly(self, base: ColoredGraph, decomposition: Decomposition) -> list[Violation]:
        found = []
        nodes = decomposition.assembly.nodes
        for kind, cells in ((CellKind.VERTEX, base.vertex_ids), (CellKind.EDGE, base.edge_ids)):
            for cell in cells:
                key = node_key(kind, cell)
                if key not in nodes or key not in decomposition.chart.by_node:
                    found.append(
                        Violation(
                            code="AssemblyIncomplete",
                            message=f"no assembly node or chart for {key}",
                            witness=[key],
                        )
                    )
        incidences = {(arc.source, arc.target) for arc in decomposition.assembly.arcs}
        for e in base.edges:
            for end in e.ends:
                pair = (node_key(CellKind.VERTEX, end), node_key(CellKind.EDGE, e.id))
                if pair not in incidences:
                    found.append(
                        Violation(
                            code="AssemblyIncomplete",
                            message=f"no assembly arc {pair[0]} -> {pair[1]}",
                            witness=list(pair),
                        )
                    )
        return found

    def _check_arcs(self, decomposition: Decomposition) -> list[Violation]:
        found = []
        chart = decomposition.chart.by_node
        for arc in decomposition.assembly.arcs:
            witness = [arc.source, arc.target, arc.gluing]
            for v in self._gluing_violations(arc.gluing):
                found.append(
                    Violation(
                        code=v.code,
                        message=f"arc {arc.source} -> {arc.target}: {v.message}",
                        witness=witness,
                    )
                )
            gluing = self.diagram.gluing_map.get(arc.gluing)
            source, target = chart.get(arc.source), chart.get(arc.target)
            if gluing is None or source is None or target is None:
                continue
            if (gluing.src, gluing.dst) != (source.production, target.production):
                found.append(
                    Violation(
                        code="CommutativityFailure",
                        message=(
                            f"arc {arc.source} -> {arc.target}: gluing '{gluing.name}' joins "
                            f"{gluing.src} to {gluing.dst}, nodes carry "
                            f"{source.production} and {target.production}"
                        ),
                        witness=witness,
                    )
                )
                continue
            for t, image in gluing.top_map.items():
                if target.top.get(image) != source.top.get(t):
                    found.append(
                        Violation(
                            code="CommutativityFailure",
                            message=(
                                f"arc {arc.source} -> {arc.target}: top vertex '{t}' is "
                                f"{source.top.get(t)} in the vertex chart but "
                                f"{target.top.get(image)} through '{gluing.name}'"
                            ),
                            witness=[*witness, t],
                        )
                    )
            for b, image in gluing.bottom_map.items():
                if target.bottom.get(image) != source.bottom.get(b):
                    found.append(
                        Violation(
                            code="CommutativityFailure",
                            message=(
                                f"arc {arc.source} -> {arc.target}: bottom vertex '{b}' is "
                                f"{source.bottom.get(b)} in the vertex chart but "
                                f"{target.bottom.get(image)} through '{gluing.name}'"
                            ),
                            witness=[*witness, b],
                        )
                    )
        return found

    def _check_count(self, fine: ColoredGraph, decomposition: Decomposition) -> list[Violation]:
        """Recount vertices from the charts: vertex tops plus the unglued part of edge tops."""
        sizes = {p.name: len(p.top.vertices) for p in self.diagram.productions}
        nodes = decomposition.assembly.nodes
        expected = 0
        for node, production in nodes.items():
            expected += sizes.get(production, 0)
        for arc in decomposition.assembly.arcs:
            expected -= sizes.get(nodes.get(arc.source, ""), 0)
        if expected != len(fine.vertices):
            return [
                Violation(
                    code="CountMismatch",
                    message=(
                        f"charts account for {expected} vertices, "
                        f"level has {len(fine.vertices)}"
                    ),
                )
            ]
        return []

    def verify_levels(self, levels: list[LevelState]) -> list[DecompositionVerdict]:
        return [self.verify(prev.graph, state) for prev, state in zip(levels, levels[1:])]

