"""Structural validation of productions, gluings and whole diagrams."""

import logging
from collections import Counter
from typing import Optional

from markovkit.models.complex import (
    ColoredEmbedding,
    ColoredGraph,
    SubdivisionPoint,
    ValidationResult,
    Violation,
)
from markovkit.models.diagram import (
    ROLES,
    CoverageRow,
    DiagramReport,
    Gluing,
    GluingVerdict,
    MarkovDiagram,
    Production,
    ProductionKind,
    ProductionVerdict,
    Role,
)
from markovkit.services.complex_ops import ComplexOps

logger = logging.getLogger(__name__)


def vertex_signature(color: int) -> str:
    return f"vertex[{color}]"


def edge_signature(color: int, end_a: int, end_b: int) -> str:
    low, high = sorted((end_a, end_b))
    return f"edge[{color}]({low},{high})"


class DiagramValidator:
    """Validation of diagram parts. Every check returns a verdict; nothing raises."""

    @staticmethod
    def validate_production(p: Production) -> ProductionVerdict:
        """
        Check one production.

        Args:
            p: Production to check

        Returns:
            ProductionVerdict with kind and map classification
        """
        violations: list[Violation] = []

        if not p.top.vertices:
            violations.append(
                Violation(code="EmptyTop", message=f"production '{p.name}' has an empty top")
            )
        for part, graph in (("top", p.top), ("bottom", p.bottom)):
            for v in ComplexOps.validate_graph(graph).violations:
                violations.append(
                    v.model_copy(update={"message": f"{p.name} {part}: {v.message}"})
                )

        kind = p.kind
        if kind is ProductionKind.UNSUPPORTED:
            violations.append(
                Violation(
                    code="UnsupportedBottom",
                    message=(
                        f"production '{p.name}' has a bottom with {len(p.bottom.vertices)} "
                        f"vertices and {len(p.bottom.edges)} edges; declare it general"
                    ),
                    witness=[p.name],
                )
            )

        classification = ComplexOps.classify_map(p.quasi_map)
        for v in classification.violations:
            violations.append(
                Violation(
                    code="InvalidMap",
                    message=f"{p.name}: {v.message}",
                    witness=[p.name, *v.witness],
                )
            )

        return ProductionVerdict(
            name=p.name,
            ok=not violations,
            kind=kind,
            classification=classification.classification,
            violations=violations,
        )

    @staticmethod
    def _embedding_violations(label: str, m: ColoredEmbedding) -> list[Violation]:
        found = []
        for v in ComplexOps.check_colored_embedding(m).violations:
            code = "ColorMismatch" if v.code == "ColorMismatch" else "NotEmbedding"
            found.append(Violation(code=code, message=f"{label}: {v.message}", witness=v.witness))
        return found

    @staticmethod
    def _bottom_image(
        gluing: Gluing, src: Production, dst: Production, point: SubdivisionPoint
    ) -> Optional[SubdivisionPoint]:
        if point.is_vertex:
            target = gluing.bottom_map.get(point.cell)
            return SubdivisionPoint.vertex(target) if target is not None else None
        edge = src.bottom.edge_map[point.cell]
        a, b = (gluing.bottom_map.get(end) for end in edge.ends)
        image = dst.bottom.edge_between(a, b) if a and b else None
        return SubdivisionPoint.barycenter(image) if image is not None else None

    @staticmethod
    def validate_gluing(gluing: Gluing, src: Production, dst: Production) -> GluingVerdict:
        """
        Check that both maps of a gluing are colored embeddings and the square commutes.

        The square is evaluated on every vertex of the source top:
        ``dst.map(top_map(v))`` must equal ``bottom_map(src.map(v))`` in the
        subdivided destination bottom.
        """
        top = ColoredEmbedding(domain=src.top, codomain=dst.top, vertex_map=gluing.top_map)
        bottom = ColoredEmbedding(
            domain=src.bottom, codomain=dst.bottom, vertex_map=gluing.bottom_map
        )
        violations = [
            *DiagramValidator._embedding_violations(f"{gluing.name} top_map", top),
            *DiagramValidator._embedding_violations(f"{gluing.name} bottom_map", bottom),
        ]

        if not violations:
            for v in src.top.vertex_ids:
                around_top = dst.map.get(gluing.top_map[v])
                around_bottom = DiagramValidator._bottom_image(gluing, src, dst, src.map[v])
                if around_top is None or around_bottom is None or around_top != around_bottom:
                    violations.append(
                        Violation(
                            code="CommutativityFailure",
                            message=(
                                f"{gluing.name}: vertex '{v}' goes to {around_top} via the top "
                                f"and to {around_bottom} via the bottom"
                            ),
                            witness=[gluing.name, v],
                        )
                    )

        role: Optional[Role] = None
        if src.kind is ProductionKind.VERTEX and dst.kind is ProductionKind.EDGE:
            target = gluing.bottom_map.get(src.bottom.vertex_ids[0])
            role = dst.role_of(target) if target is not None else None

        return GluingVerdict(name=gluing.name, ok=not violations, role=role, violations=violations)

    @staticmethod
    def check_elementary(d: MarkovDiagram) -> bool:
        return all(
            p.kind in (ProductionKind.VERTEX, ProductionKind.EDGE) for p in d.productions
        )

    @staticmethod
    def production_signature(p: Production) -> Optional[str]:
        if p.kind is ProductionKind.VERTEX:
            return vertex_signature(p.bottom.vertices[0].color)
        if p.kind is ProductionKind.EDGE:
            edge = p.bottom.edges[0]
            colors = p.bottom.vertex_colors
            return edge_signature(edge.color, colors[edge.ends[0]], colors[edge.ends[1]])
        return None

    @staticmethod
    def graph_signatures(g: ColoredGraph) -> set[str]:
        found = {vertex_signature(v.color) for v in g.vertices}
        for e in g.edges:
            a, b = e.ends
            found.add(edge_signature(e.color, g.vertex_colors[a], g.vertex_colors[b]))
        return found

    @staticmethod
    def signature_table(d: MarkovDiagram) -> dict[str, list[str]]:
        """Signature -> names of the productions whose bottom has that signature."""
        table: dict[str, list[str]] = {}
        for p in d.productions:
            signature = DiagramValidator.production_signature(p)
            if signature is not None:
                table.setdefault(signature, []).append(p.name)
        return table

    @staticmethod
    def gluing_roles(d: MarkovDiagram) -> dict[tuple[str, str, Role], list[str]]:
        """(vertex production, edge production, role) -> gluing names."""
        roles: dict[tuple[str, str, Role], list[str]] = {}
        for g in d.gluings:
            src, dst = d.production_map.get(g.src), d.production_map.get(g.dst)
            if src is None or dst is None:
                continue
            if src.kind is not ProductionKind.VERTEX or dst.kind is not ProductionKind.EDGE:
                continue
            target = g.bottom_map.get(src.bottom.vertex_ids[0])
            role = dst.role_of(target) if target is not None else None
            if role is not None:
                roles.setdefault((src.name, dst.name, role), []).append(g.name)
        return roles

    @staticmethod
    def coverage_check(d: MarkovDiagram, report: Optional[DiagramReport] = None) -> DiagramReport:
        """
        Match every color signature to exactly one production, and every
        (vertex production, edge production, role) demanded by adjacency to exactly
        one gluing.

        Args:
            d: Elementary diagram
            report: Report to extend; a fresh one is computed when omitted

        Returns:
            DiagramReport with the coverage table and the missing/ambiguous lists
        """
        if report is None:
            report = DiagramValidator.validate_diagram(d, with_coverage=False)

        demanded: set[str] = set(DiagramValidator.graph_signatures(d.start))
        for p in d.productions:
            demanded |= DiagramValidator.graph_signatures(p.top)

        table = DiagramValidator.signature_table(d)
        roles = DiagramValidator.gluing_roles(d)
        rows: list[CoverageRow] = []
        missing: list[Violation] = []
        ambiguous: list[Violation] = []

        def vertex_production(color: int) -> Optional[str]:
            names = table.get(vertex_signature(color), [])
            return names[0] if len(names) == 1 else None

        for signature in sorted(demanded):
            candidates = table.get(signature, [])
            row = CoverageRow(signature=signature, candidates=list(candidates))
            if not candidates:
                missing.append(
                    Violation(
                        code="MissingProduction",
                        message=f"no production matches {signature}",
                        witness=[signature],
                    )
                )
            elif len(candidates) > 1:
                ambiguous.append(
                    Violation(
                        code="AmbiguousProduction",
                        message=f"{signature} matches {candidates}",
                        witness=[signature, *candidates],
                    )
                )
            else:
                row.production = candidates[0]

            ep = d.production_map.get(row.production) if row.production else None
            if ep is not None and ep.kind is ProductionKind.EDGE:
                for role in ROLES:
                    color = ep.bottom.vertex_colors[ep.endpoint(role)]
                    vp = vertex_production(color)
                    if vp is None:
                        # reported on its own vertex signature row
                        continue
                    names = roles.get((vp, ep.name, role), [])
                    row.gluings[f"{vp}@{role}"] = list(names)
                    if not names:
                        missing.append(
                            Violation(
                                code="MissingGluing",
                                message=f"no gluing of {vp} into {ep.name} at the {role}",
                                witness=[vp, ep.name, role],
                            )
                        )
                    elif len(names) > 1:
                        ambiguous.append(
                            Violation(
                                code="AmbiguousGluing",
                                message=f"gluings {names} glue {vp} into {ep.name} at the {role}",
                                witness=[vp, ep.name, role, *names],
                            )
                        )
            rows.append(row)

        return report.model_copy(
            update={
                "coverage_checked": True,
                "coverage": rows,
                "missing": missing,
                "ambiguous": ambiguous,
            }
        )

    @staticmethod
    def _palette_result(d: MarkovDiagram) -> ValidationResult:
        violations: list[Violation] = []
        counts = Counter(entry.id for entry in d.palette)
        for color, count in sorted(counts.items()):
            if count > 1:
                violations.append(
                    Violation(
                        code="DuplicateId",
                        message=f"palette color {color} declared {count} times",
                        witness=[str(color)],
                    )
                )
        if d.palette:
            graphs = [("start", d.start)]
            for p in d.productions:
                graphs += [(f"{p.name} top", p.top), (f"{p.name} bottom", p.bottom)]
            for label, graph in graphs:
                used = {v.color for v in graph.vertices} | {e.color for e in graph.edges}
                for color in sorted(used - d.palette_ids):
                    violations.append(
                        Violation(
                            code="ColorOutsidePalette",
                            message=f"{label} uses undeclared color {color}",
                            witness=[label, str(color)],
                        )
                    )
        return ValidationResult.from_violations(violations)

    @staticmethod
    def _reference_result(d: MarkovDiagram) -> ValidationResult:
        violations: list[Violation] = []
        for kind, names in (
            ("production", [p.name for p in d.productions]),
            ("gluing", [g.name for g in d.gluings]),
        ):
            for name, count in sorted(Counter(names).items()):
                if count > 1:
                    violations.append(
                        Violation(
                            code="DuplicateName",
                            message=f"{kind} '{name}' declared {count} times",
                            witness=[name],
                        )
                    )
        for g in d.gluings:
            for ref in (g.src, g.dst):
                if ref not in d.production_map:
                    violations.append(
                        Violation(
                            code="UnknownReference",
                            message=f"gluing '{g.name}' refers to unknown production '{ref}'",
                            witness=[g.name, ref],
                        )
                    )
        return ValidationResult.from_violations(violations)

    @staticmethod
    def validate_diagram(d: MarkovDiagram, with_coverage: bool = True) -> DiagramReport:
        """
        Full structural report: start graph, palette, references, productions,
        gluings, elementary flag and, for valid elementary diagrams, coverage.
        """
        productions = {p.name: DiagramValidator.validate_production(p) for p in d.productions}

        gluings: dict[str, GluingVerdict] = {}
        for g in d.gluings:
            src, dst = d.production_map.get(g.src), d.production_map.get(g.dst)
            if src is None or dst is None:
                gluings[g.name] = GluingVerdict(
                    name=g.name,
                    ok=False,
                    violations=[
                        Violation(
                            code="UnknownReference",
                            message=f"gluing '{g.name}' refers to an unknown production",
                            witness=[g.name],
                        )
                    ],
                )
                continue
            gluings[g.name] = DiagramValidator.validate_gluing(g, src, dst)

        report = DiagramReport(
            name=d.name,
            start=ComplexOps.validate_graph(d.start),
            palette=DiagramValidator._palette_result(d),
            references=DiagramValidator._reference_result(d),
            productions=productions,
            gluings=gluings,
            elementary=DiagramValidator.check_elementary(d),
        )
        if with_coverage and report.valid and report.elementary:
            report = DiagramValidator.coverage_check(d, report)

        logger.info(
            "Validated diagram %s: valid=%s elementary=%s complete=%s",
            d.name,
            report.valid,
            report.elementary,
            report.complete,
        )
        return report

    @staticmethod
    def orient(
        ep: Production, a: str, b: str, color_a: int, color_b: int
    ) -> tuple[str, str]:
        """
        Decide which end of a concrete edge plays the tail of ``ep``'s bottom edge.

        Colors decide when the bottom endpoints differ in color; otherwise the
        lexicographically smaller identifier is the tail.
        """
        tail_color = ep.bottom.vertex_colors[ep.endpoint("tail")]
        head_color = ep.bottom.vertex_colors[ep.endpoint("head")]
        if tail_color != head_color:
            return (a, b) if (color_a, color_b) == (tail_color, head_color) else (b, a)
        return (a, b) if a <= b else (b, a)
