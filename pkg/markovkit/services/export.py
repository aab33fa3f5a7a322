"""Graph exports, level tables and the PDF certificate report."""

import io
import json
import logging
from pathlib import Path
from typing import Optional
from xml.sax.saxutils import escape

import pandas as pd
from jinja2 import Environment, FileSystemLoader, StrictUndefined
from reportlab.lib import colors
from reportlab.lib.pagesizes import A4
from reportlab.lib.styles import getSampleStyleSheet
from reportlab.lib.units import inch
from reportlab.platypus import Paragraph, SimpleDocTemplate, Spacer, Table, TableStyle

from markovkit.errors import UnsupportedFormat
from markovkit.models.complex import ColoredGraph, Violation
from markovkit.models.diagram import PaletteEntry
from markovkit.models.expansion import LevelState
from markovkit.models.export import ExportEdge, ExportNode, GraphExport
from markovkit.models.verdicts import Certificate
from markovkit.services.complex_ops import ComplexOps
from markovkit.services.graph_algorithms import GraphAlgorithms

logger = logging.getLogger(__name__)

TEMPLATES_DIR = Path(__file__).resolve().parent.parent / "templates"
EXPORT_FORMATS = ("dot", "json")

LEVEL_COLUMNS = {
    "level": "Level",
    "vertices": "Vertices",
    "edges": "Edges",
    "components": "Components",
    "euler_characteristic": "V - E",
    "bonding_class": "Bonding map",
}


def _dot_id(value: object) -> str:
    return json.dumps(str(value))


def _dot_color(color: int) -> int:
    # set19 has nine entries
    return color % 9 + 1


_environment = Environment(
    loader=FileSystemLoader(str(TEMPLATES_DIR)),
    undefined=StrictUndefined,
    trim_blocks=True,
    lstrip_blocks=True,
    keep_trailing_newline=True,
)
_environment.filters["dot_id"] = _dot_id
_environment.filters["dot_color"] = _dot_color


class Exporter:
    """Render graphs, levels and certificates for files and HTTP responses."""

    @staticmethod
    def graph_export(
        graph: ColoredGraph,
        name: str = "graph",
        level: Optional[int] = None,
        palette: tuple[PaletteEntry, ...] = (),
    ) -> GraphExport:
        styles = {entry.id: entry.style for entry in palette}
        return GraphExport(
            name=name,
            level=level,
            nodes=[ExportNode(id=v.id, color=v.color) for v in graph.vertices],
            edges=[
                ExportEdge(
                    id=e.id,
                    source=e.ends[0],
                    target=e.ends[1],
                    color=e.color,
                    style=styles.get(e.color, "solid"),
                )
                for e in graph.edges
            ],
        )

    @staticmethod
    def export_graph(
        graph: ColoredGraph,
        fmt: str = "dot",
        name: str = "graph",
        level: Optional[int] = None,
        palette: tuple[PaletteEntry, ...] = (),
    ) -> str:
        """
        Render a graph as DOT or as a plain JSON node/edge listing.

        Args:
            graph: Graph to export (node names are its vertex ids, i.e. addresses)
            fmt: ``dot`` or ``json``
            name: Graph name
            level: Level index, recorded in the output
            palette: Palette providing edge styles per color

        Returns:
            Export text

        Raises:
            UnsupportedFormat: fmt is not one of the export formats
        """
        if fmt not in EXPORT_FORMATS:
            raise UnsupportedFormat(fmt)
        export = Exporter.graph_export(graph, name, level, palette)
        if fmt == "json":
            return export.model_dump_json(indent=2) + "\n"
        label = name if level is None else f"{name} level {level}"
        template = _environment.get_template("graph.dot.j2")
        return template.render(name=name, label=label, nodes=export.nodes, edges=export.edges)

    @staticmethod
    def level_table(levels: list[LevelState]) -> pd.DataFrame:
        """One row per level: counts, components, Euler characteristic and bonding class."""
        rows = []
        for state in levels:
            vertices, edges = state.graph.counts
            bonding = None
            if state.decomposition is not None:
                classified = ComplexOps.classify_map(state.decomposition.bonding, mixed_ok=True)
                bonding = classified.classification.value
            rows.append(
                {
                    "level": state.index,
                    "vertices": vertices,
                    "edges": edges,
                    "components": len(GraphAlgorithms.connected_components(state.graph)),
                    "euler_characteristic": vertices - edges,
                    "bonding_class": bonding,
                }
            )
        return pd.DataFrame(rows, columns=list(LEVEL_COLUMNS))

    @staticmethod
    def levels_csv(levels: list[LevelState]) -> str:
        df = Exporter.level_table(levels).rename(columns=LEVEL_COLUMNS)
        buffer = io.StringIO()
        df.to_csv(buffer, index=False)
        return buffer.getvalue()

    @staticmethod
    def _failure_rows(title: str, failures: list[Violation]) -> list[list[str]]:
        return [[title, f.code, f.message] for f in failures]

    @staticmethod
    def render_certificate_pdf(certificate: Certificate) -> bytes:
        """
        Render a certificate as a one-document PDF report.

        Args:
            certificate: Certificate to render

        Returns:
            PDF bytes
        """
        buffer = io.BytesIO()
        name = escape(certificate.diagram_name)
        doc = SimpleDocTemplate(buffer, pagesize=A4, title=f"Certificate {name}")
        styles = getSampleStyleSheet()
        normal = styles["Normal"]
        elements = [
            Paragraph(f"markovkit certificate: {name}", styles["Title"]),
            Spacer(1, 0.2 * inch),
        ]

        properties = ", ".join(certificate.properties) or "none"
        summary_text = f"""
        <b>Verdict: {certificate.label}</b><br/>
        Properties: {properties}<br/>
        Diagram hash: {certificate.diagram_hash}<br/>
        Depth: {certificate.depth}<br/>
        Tool version: {certificate.tool_version} ({certificate.schema_version})
        """
        elements.append(Paragraph(summary_text, normal))
        elements.append(Spacer(1, 0.3 * inch))

        dap = certificate.dap
        hypotheses = [
            ["Hypothesis", "Holds"],
            ["Connectedness hypotheses", str(certificate.connectivity.hypotheses_hold)],
            ["Vertex tops judged", certificate.connectivity.vertex_tops],
            ["Elementary", str(dap.elementary)],
            ["Canonical vertex productions", str(dap.vertex_productions_canonical)],
            ["Edge tops connected", str(dap.edge_tops_connected)],
            ["Edge tops biconnected", str(dap.edge_tops_biconnected)],
            ["Levels finite", str(certificate.facts.levels_finite)],
            ["At least two points", str(certificate.facts.at_least_two_points)],
        ]
        elements.append(Exporter._table(hypotheses))
        elements.append(Spacer(1, 0.3 * inch))

        failures = [
            *Exporter._failure_rows("connectedness", certificate.connectivity.failures),
            *Exporter._failure_rows("disjoint arcs", dap.failures),
        ]
        if failures:
            elements.append(Paragraph("<b>Failed hypotheses</b>", normal))
            elements.append(Spacer(1, 0.1 * inch))
            rows = [["Check", "Code", "Detail"]]
            rows += [
                [check, code, Paragraph(escape(message), normal)]
                for check, code, message in failures
            ]
            elements.append(Exporter._table(rows, col_widths=[1.2 * inch, 1.6 * inch, 3.8 * inch]))
            elements.append(Spacer(1, 0.3 * inch))

        counts = [["Level", "Vertices", "Edges"]]
        counts += [
            [str(i), str(v), str(e)]
            for i, (v, e) in enumerate(certificate.facts.level_counts, start=1)
        ]
        elements.append(Paragraph("<b>Levels</b>", normal))
        elements.append(Spacer(1, 0.1 * inch))
        elements.append(Exporter._table(counts))

        if certificate.metrics is not None:
            metrics = certificate.metrics
            elements.append(Spacer(1, 0.3 * inch))
            elements.append(
                Paragraph(
                    f"<b>Metric summary</b> (schedule {metrics.schedule}): "
                    f"Lipschitz {'ok' if metrics.lipschitz_ok else 'violated'} "
                    f"({metrics.lipschitz_violations} violations), "
                    f"tail {'finite' if metrics.tail_finite else 'divergent'}",
                    normal,
                )
            )
            elements.append(Spacer(1, 0.1 * inch))
            mesh = [["Level", "kappa", "Diameter", "Mesh", "Tail"]]
            mesh += [
                [str(m.level), str(m.kappa), str(m.diameter), str(m.mesh), str(m.tail or "-")]
                for m in metrics.mesh
            ]
            elements.append(Exporter._table(mesh))

        doc.build(elements)
        logger.info("Rendered certificate PDF for %s", certificate.diagram_name)
        return buffer.getvalue()

    @staticmethod
    def _table(rows: list[list], col_widths: Optional[list[float]] = None) -> Table:
        table = Table(rows, repeatRows=1, colWidths=col_widths)
        table.setStyle(
            TableStyle(
                [
                    ("BACKGROUND", (0, 0), (-1, 0), colors.grey),
                    ("TEXTCOLOR", (0, 0), (-1, 0), colors.whitesmoke),
                    ("FONTNAME", (0, 0), (-1, 0), "Helvetica-Bold"),
                    ("FONTSIZE", (0, 0), (-1, -1), 8),
                    ("VALIGN", (0, 0), (-1, -1), "TOP"),
                    ("GRID", (0, 0), (-1, -1), 0.5, colors.black),
                    ("ROWBACKGROUNDS", (0, 1), (-1, -1), [colors.white, colors.lightgrey]),
                ]
            )
        )
        return table
