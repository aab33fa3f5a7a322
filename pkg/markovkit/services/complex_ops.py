"""Operations on colored graphs: validation, subdivision, maps and distances."""

import logging
from collections import Counter
from fractions import Fraction
from typing import Optional

import networkx as nx
from networkx.algorithms import isomorphism

from markovkit.errors import PreconditionFailed, UnknownVertex
from markovkit.models.complex import (
    ColoredEmbedding,
    ColoredGraph,
    Edge,
    EdgeShape,
    GeodesicScale,
    GraphPoint,
    MapClass,
    MapClassification,
    QuasiSimplicialMap,
    Subdivision,
    SubdivisionPoint,
    ValidationResult,
    Vertex,
    Violation,
)

logger = logging.getLogger(__name__)

_HALF = Fraction(1, 2)


class ComplexOps:
    """Pure operations on finite colored graphs."""

    @staticmethod
    def validate_graph(g: ColoredGraph) -> ValidationResult:
        """
        Check the structural invariants of a colored graph.

        Args:
            g: Graph to check

        Returns:
            ValidationResult listing every violation with the offending cell ids
        """
        violations: list[Violation] = []

        id_counts = Counter(g.vertex_ids + g.edge_ids)
        for cell_id, count in sorted(id_counts.items()):
            if count > 1:
                violations.append(
                    Violation(
                        code="DuplicateId",
                        message=f"identifier '{cell_id}' used {count} times",
                        witness=[cell_id],
                    )
                )

        seen_pairs: dict[frozenset[str], str] = {}
        for edge in g.edges:
            a, b = edge.ends
            for end in (a, b):
                if not g.has_vertex(end):
                    violations.append(
                        Violation(
                            code="DanglingEndpoint",
                            message=f"edge '{edge.id}' references missing vertex '{end}'",
                            witness=[edge.id, end],
                        )
                    )
            if a == b:
                violations.append(
                    Violation(
                        code="SelfLoop",
                        message=f"edge '{edge.id}' joins '{a}' to itself",
                        witness=[edge.id],
                    )
                )
                continue
            pair = frozenset((a, b))
            if pair in seen_pairs:
                violations.append(
                    Violation(
                        code="DuplicateEdge",
                        message=(
                            f"edges '{seen_pairs[pair]}' and '{edge.id}' "
                            "join the same vertices"
                        ),
                        witness=[seen_pairs[pair], edge.id],
                    )
                )
            else:
                seen_pairs[pair] = edge.id

        return ValidationResult.from_violations(violations)

    @staticmethod
    def barycentric_subdivide(g: ColoredGraph) -> Subdivision:
        """
        Split every edge at its barycenter.

        Vertex ids of the result are the text form of their SubdivisionPoint
        (``v:<id>`` or ``bary:<edge>``); the two halves of edge ``e`` are
        ``e.0`` (at ``ends[0]``) and ``e.1``. New cells copy the edge color.
        """
        points: dict[str, SubdivisionPoint] = {}
        vertices: list[Vertex] = []
        edges: list[Edge] = []

        for v in g.vertices:
            point = SubdivisionPoint.vertex(v.id)
            points[str(point)] = point
            vertices.append(Vertex(id=str(point), color=v.color))

        for e in g.edges:
            center = SubdivisionPoint.barycenter(e.id)
            points[str(center)] = center
            vertices.append(Vertex(id=str(center), color=e.color))
            for half, end in enumerate(e.ends):
                edges.append(
                    Edge(
                        id=f"{e.id}.{half}",
                        ends=(str(SubdivisionPoint.vertex(end)), str(center)),
                        color=e.color,
                    )
                )

        graph = ColoredGraph(vertices=tuple(vertices), edges=tuple(edges))
        return Subdivision(graph=graph, points=points)

    @staticmethod
    def edge_shape(codomain: ColoredGraph, p: SubdivisionPoint, q: SubdivisionPoint) -> EdgeShape:
        """Shape of the segment between two points of the subdivided codomain."""
        if p == q:
            return EdgeShape.DEGENERATE
        if p.is_vertex and q.is_vertex:
            if codomain.edge_between(p.cell, q.cell) is not None:
                return EdgeShape.FULL
            return EdgeShape.INVALID
        if not p.is_vertex and not q.is_vertex:
            return EdgeShape.INVALID
        vertex, center = (p, q) if p.is_vertex else (q, p)
        edge = codomain.edge_map.get(center.cell)
        if edge is not None and vertex.cell in edge.ends:
            return EdgeShape.HALF
        return EdgeShape.INVALID

    @staticmethod
    def classify_map(m: QuasiSimplicialMap, mixed_ok: bool = False) -> MapClassification:
        """
        Classify a vertex map into the barycentric subdivision of its codomain.

        Args:
            m: Map to classify
            mixed_ok: Accept full-edge images next to barycenter targets as ``mixed``
                (bonding maps of diagrams that combine simplicial and
                quasi-simplicial productions); otherwise such a map is invalid

        Returns:
            MapClassification with per-edge shapes. A map without full edges and
            without barycenters is reported as ``both``.
        """
        violations: list[Violation] = []

        for v in m.domain.vertex_ids:
            point = m.vertex_image.get(v)
            if point is None:
                violations.append(
                    Violation(code="InvalidMap", message=f"vertex '{v}' has no image", witness=[v])
                )
            elif point.is_vertex and not m.codomain.has_vertex(point.cell):
                violations.append(
                    Violation(
                        code="InvalidMap",
                        message=f"vertex '{v}' maps to unknown vertex '{point.cell}'",
                        witness=[v, str(point)],
                    )
                )
            elif not point.is_vertex and point.cell not in m.codomain.edge_map:
                violations.append(
                    Violation(
                        code="InvalidMap",
                        message=f"vertex '{v}' maps to barycenter of unknown edge '{point.cell}'",
                        witness=[v, str(point)],
                    )
                )
        for v in sorted(set(m.vertex_image) - set(m.domain.vertex_ids)):
            violations.append(
                Violation(
                    code="InvalidMap",
                    message=f"map assigns an image to unknown vertex '{v}'",
                    witness=[v],
                )
            )
        if violations:
            return MapClassification(
                classification=MapClass.INVALID,
                is_simplicial=False,
                is_quasi_simplicial=False,
                violations=violations,
            )

        shapes: dict[str, EdgeShape] = {}
        for e in m.domain.edges:
            a, b = (m.vertex_image[end] for end in e.ends)
            shape = ComplexOps.edge_shape(m.codomain, a, b)
            shapes[e.id] = shape
            if shape is EdgeShape.INVALID:
                violations.append(
                    Violation(
                        code="InvalidEdgeImage",
                        message=f"edge '{e.id}' maps onto {a} - {b}, which is not a cell",
                        witness=[e.id],
                    )
                )
        if violations:
            return MapClassification(
                classification=MapClass.INVALID,
                is_simplicial=False,
                is_quasi_simplicial=False,
                edge_shapes=shapes,
                violations=violations,
            )

        uses_barycenter = any(not p.is_vertex for p in m.vertex_image.values())
        uses_full_edge = any(shape is EdgeShape.FULL for shape in shapes.values())
        is_simplicial = not uses_barycenter
        is_quasi = not uses_full_edge

        if is_simplicial and is_quasi:
            classification = MapClass.BOTH
        elif is_quasi:
            classification = MapClass.QUASI_SIMPLICIAL
        elif is_simplicial:
            classification = MapClass.SIMPLICIAL
        elif mixed_ok:
            classification = MapClass.MIXED
        else:
            # Full edges next to barycenters: simplicial into neither K nor its subdivision.
            violations.append(
                Violation(
                    code="InvalidMap",
                    message="map mixes full-edge images with barycenter targets",
                    witness=sorted(e for e, s in shapes.items() if s is EdgeShape.FULL),
                )
            )
            return MapClassification(
                classification=MapClass.INVALID,
                is_simplicial=False,
                is_quasi_simplicial=False,
                edge_shapes=shapes,
                violations=violations,
            )

        return MapClassification(
            classification=classification,
            is_simplicial=is_simplicial,
            is_quasi_simplicial=is_quasi,
            edge_shapes=shapes,
        )

    @staticmethod
    def check_colored_embedding(m: ColoredEmbedding) -> ValidationResult:
        """Check injectivity, edge preservation and color preservation of a vertex map."""
        violations: list[Violation] = []
        dom, cod = m.domain, m.codomain

        for v in dom.vertex_ids:
            target = m.vertex_map.get(v)
            if target is None or not cod.has_vertex(target):
                violations.append(
                    Violation(
                        code="NotEmbedding",
                        message=f"vertex '{v}' has no image in the codomain",
                        witness=[v] if target is None else [v, target],
                    )
                )
            elif dom.vertex_colors[v] != cod.vertex_colors[target]:
                violations.append(
                    Violation(
                        code="ColorMismatch",
                        message=(
                            f"vertex '{v}' (color {dom.vertex_colors[v]}) maps to "
                            f"'{target}' (color {cod.vertex_colors[target]})"
                        ),
                        witness=[v, target],
                    )
                )
        for v in sorted(set(m.vertex_map) - set(dom.vertex_ids)):
            violations.append(
                Violation(
                    code="NotEmbedding",
                    message=f"map assigns an image to unknown vertex '{v}'",
                    witness=[v],
                )
            )

        preimages: dict[str, list[str]] = {}
        for v in dom.vertex_ids:
            if v in m.vertex_map:
                preimages.setdefault(m.vertex_map[v], []).append(v)
        for target, sources in sorted(preimages.items()):
            if len(sources) > 1:
                violations.append(
                    Violation(
                        code="NotInjective",
                        message=f"vertices {sources} all map to '{target}'",
                        witness=[*sources, target],
                    )
                )

        for e in dom.edges:
            a, b = (m.vertex_map.get(end) for end in e.ends)
            if a is None or b is None:
                continue
            image = cod.edge_between(a, b) if a != b else None
            if image is None:
                violations.append(
                    Violation(
                        code="EdgeNotPreserved",
                        message=f"edge '{e.id}' maps onto {a} - {b}, which is not an edge",
                        witness=[e.id],
                    )
                )
            elif cod.edge_map[image].color != e.color:
                violations.append(
                    Violation(
                        code="ColorMismatch",
                        message=(
                            f"edge '{e.id}' (color {e.color}) maps to edge '{image}' "
                            f"(color {cod.edge_map[image].color})"
                        ),
                        witness=[e.id, image],
                    )
                )

        return ValidationResult.from_violations(violations)

    @staticmethod
    def colored_isomorphism(a: ColoredGraph, b: ColoredGraph) -> Optional[ColoredEmbedding]:
        """
        Find a color-preserving isomorphism from ``a`` onto ``b``.

        Returns:
            The first isomorphism in VF2 search order over sorted ids, or None
        """
        if a.counts != b.counts:
            return None
        if sorted(a.vertex_colors.values()) != sorted(b.vertex_colors.values()):
            return None
        if sorted(e.color for e in a.edges) != sorted(e.color for e in b.edges):
            return None

        matcher = isomorphism.GraphMatcher(
            a.nx_graph,
            b.nx_graph,
            node_match=isomorphism.categorical_node_match("color", None),
            edge_match=isomorphism.categorical_edge_match("color", None),
        )
        for mapping in matcher.isomorphisms_iter():
            return ColoredEmbedding(domain=a, codomain=b, vertex_map=dict(sorted(mapping.items())))
        return None

    @staticmethod
    def geodesic_distance(
        g: ColoredGraph, scale: GeodesicScale, u: str, v: str
    ) -> Optional[Fraction]:
        """
        Scaled shortest-path distance between two vertices.

        Returns:
            kappa times the edge count of a shortest path, or None when ``u`` and
            ``v`` lie in different components
        """
        for vertex in (u, v):
            if not g.has_vertex(vertex):
                raise UnknownVertex(vertex)
        try:
            hops = nx.shortest_path_length(g.nx_graph, u, v)
        except nx.NetworkXNoPath:
            return None
        return scale.kappa * hops

    @staticmethod
    def normalize_point(g: ColoredGraph, point: GraphPoint) -> GraphPoint:
        """Collapse edge points at offset 0 or 1 onto the corresponding vertex."""
        if point.kind == "vertex":
            if not g.has_vertex(point.cell):
                raise UnknownVertex(point.cell)
            return point
        edge = g.edge_map.get(point.cell)
        if edge is None:
            raise UnknownVertex(point.cell)
        if not 0 <= point.offset <= 1:
            raise PreconditionFailed(f"offset {point.offset} outside edge '{edge.id}'")
        if point.offset == 0:
            return GraphPoint(kind="vertex", cell=edge.ends[0])
        if point.offset == 1:
            return GraphPoint(kind="vertex", cell=edge.ends[1])
        return point

    @staticmethod
    def subdivision_point(g: ColoredGraph, point: SubdivisionPoint) -> GraphPoint:
        """The GraphPoint a vertex of the subdivision stands for."""
        if point.is_vertex:
            return ComplexOps.normalize_point(g, GraphPoint(kind="vertex", cell=point.cell))
        return ComplexOps.normalize_point(g, GraphPoint(kind="edge", cell=point.cell, offset=_HALF))

    @staticmethod
    def _offset_on(edge: Edge, point: GraphPoint) -> Optional[Fraction]:
        if point.kind == "vertex":
            if point.cell == edge.ends[0]:
                return Fraction(0)
            if point.cell == edge.ends[1]:
                return Fraction(1)
            return None
        return point.offset if point.cell == edge.id else None

    @staticmethod
    def push_point(m: QuasiSimplicialMap, point: GraphPoint) -> GraphPoint:
        """
        Image of a point of the domain under the piecewise linear extension of ``m``.

        Edges map affinely onto their image segment, so rational points stay rational.
        """
        point = ComplexOps.normalize_point(m.domain, point)
        if point.kind == "vertex":
            return ComplexOps.subdivision_point(m.codomain, m.vertex_image[point.cell])

        edge = m.domain.edge_map[point.cell]
        pa, pb = (
            ComplexOps.subdivision_point(m.codomain, m.vertex_image[end]) for end in edge.ends
        )
        if pa == pb:
            return pa

        if pa.kind == "edge":
            carrier = pa.cell
        elif pb.kind == "edge":
            carrier = pb.cell
        else:
            carrier = m.codomain.edge_between(pa.cell, pb.cell)
        target = m.codomain.edge_map.get(carrier) if carrier is not None else None
        oa = ComplexOps._offset_on(target, pa) if target is not None else None
        ob = ComplexOps._offset_on(target, pb) if target is not None else None
        if oa is None or ob is None:
            raise PreconditionFailed(f"edge '{edge.id}' has no cell as image; map is invalid")
        offset = oa + point.offset * (ob - oa)
        return ComplexOps.normalize_point(
            m.codomain, GraphPoint(kind="edge", cell=target.id, offset=offset)
        )

    @staticmethod
    def exits(g: ColoredGraph, point: GraphPoint) -> list[tuple[str, Fraction]]:
        """Vertices reachable from a point along its carrier, with the edge length travelled."""
        point = ComplexOps.normalize_point(g, point)
        if point.kind == "vertex":
            return [(point.cell, Fraction(0))]
        tail, head = g.edge_map[point.cell].ends
        return [(tail, point.offset), (head, 1 - point.offset)]

    @staticmethod
    def point_hops(
        g: ColoredGraph,
        p: GraphPoint,
        q: GraphPoint,
        lengths: Optional[dict[str, dict[str, int]]] = None,
    ) -> Optional[Fraction]:
        """
        Unscaled geodesic distance between two points, in edge lengths.

        Args:
            g: Graph carrying both points
            p, q: Points of ``g``
            lengths: Precomputed all-pairs hop counts; breadth-first search otherwise

        Returns:
            Exact rational distance, or None when the points lie in different components
        """
        p = ComplexOps.normalize_point(g, p)
        q = ComplexOps.normalize_point(g, q)
        best: Optional[Fraction] = None
        if p.kind == "edge" and q.kind == "edge" and p.cell == q.cell:
            best = abs(p.offset - q.offset)

        q_exits = ComplexOps.exits(g, q)
        for start, lead in ComplexOps.exits(g, p):
            if lengths is not None:
                reach = lengths.get(start, {})
            else:
                reach = nx.single_source_shortest_path_length(g.nx_graph, start)
            for end, trail in q_exits:
                if end not in reach:
                    continue
                candidate = lead + reach[end] + trail
                if best is None or candidate < best:
                    best = candidate
        return best

    @staticmethod
    def point_distance(
        g: ColoredGraph, scale: GeodesicScale, p: GraphPoint, q: GraphPoint
    ) -> Optional[Fraction]:
        """Geodesic distance of scale ``kappa`` between two points; None when separated."""
        hops = ComplexOps.point_hops(g, p, q)
        return None if hops is None else scale.kappa * hops

    @staticmethod
    def diameter(g: ColoredGraph) -> int:
        """Largest edge-count distance between two vertices of the same component."""
        longest = 0
        for component in nx.connected_components(g.nx_graph):
            if len(component) > 1:
                longest = max(longest, nx.diameter(g.nx_graph.subgraph(component)))
        return longest
