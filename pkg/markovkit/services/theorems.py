"""Hypothesis checkers for connectedness, the disjoint arcs property and the Menger verdict."""

import logging
from collections import Counter
from datetime import datetime, timezone
from typing import Optional

import networkx as nx

from markovkit.config import CERTIFICATE_SCHEMA, TOOL_VERSION
from markovkit.errors import (
    ConstructionFailed,
    DiagramInvalid,
    IndexOutOfRange,
    MarkovError,
    PreconditionFailed,
)
from markovkit.models.complex import ColoredGraph, MapClass, Violation
from markovkit.models.diagram import DiagramReport, MarkovDiagram, Production, ProductionKind
from markovkit.models.expansion import CellKind, LevelState, node_key
from markovkit.models.metrics import MetricSchedule
from markovkit.models.verdicts import (
    Certificate,
    CompactnessFacts,
    ConnectivityVerdict,
    DapVerdict,
    PairingFeasibility,
    SectionCheck,
    SectionPair,
    SectionSummary,
)
from markovkit.services.complex_ops import ComplexOps
from markovkit.services.diagram_checks import DiagramValidator
from markovkit.services.dsl import DiagramCodec
from markovkit.services.expansion import ExpansionEngine
from markovkit.services.graph_algorithms import GraphAlgorithms
from markovkit.services.metrics import LimitMetrics

logger = logging.getLogger(__name__)

QUASI = (MapClass.QUASI_SIMPLICIAL, MapClass.BOTH)


def _require_valid(d: MarkovDiagram, report: Optional[DiagramReport]) -> DiagramReport:
    report = report or DiagramValidator.validate_diagram(d)
    if not report.valid:
        raise DiagramInvalid(report)
    return report


def _no_isolated_vertices(g: ColoredGraph) -> bool:
    return bool(g.vertices) and nx.number_of_isolates(g.nx_graph) == 0


def _fiber_letters(vp: Production) -> tuple[str, str]:
    """Top vertices of a canonical vertex production marked A and B (sorted ids)."""
    first, second = sorted(vp.top.vertex_ids)
    return first, second


class TheoremChecker:
    """Combinatorial sufficient conditions on a diagram and the witnesses they promise."""

    @staticmethod
    def glued_star(d: MarkovDiagram, vp: Production) -> nx.Graph:
        """
        The top of a vertex production joined to one copy of every edge-production
        top it is glued into, identified along the gluing maps.
        """
        star = nx.Graph()
        own = ("top", vp.name)
        star.add_nodes_from((own, v) for v in vp.top.vertex_ids)
        star.add_edges_from(((own, a), (own, b)) for a, b in (e.ends for e in vp.top.edges))
        for gluing in d.gluings:
            dst = d.production_map.get(gluing.dst)
            if gluing.src != vp.name or dst is None:
                continue
            copy = ("glued", gluing.name)
            star.add_nodes_from((copy, v) for v in dst.top.vertex_ids)
            star.add_edges_from(((copy, a), (copy, b)) for a, b in (e.ends for e in dst.top.edges))
            # identification drawn as a zero-length edge keeps connectivity unchanged
            star.add_edges_from(((own, t), (copy, image)) for t, image in gluing.top_map.items())
        return star

    @staticmethod
    def stars_apply(d: MarkovDiagram) -> bool:
        """
        True when no level of the expansion has an isolated vertex.

        The start graph must have no isolated vertex and every edge-production
        top must have none either. Then every vertex fiber is glued into at
        least one edge-production top, so judging a vertex top by its glued
        star is sound.
        """
        if not _no_isolated_vertices(d.start):
            return False
        for p in d.productions:
            if p.kind is ProductionKind.EDGE:
                if not _no_isolated_vertices(p.top):
                    return False
            elif p.kind is not ProductionKind.VERTEX:
                return False
        return True

    @staticmethod
    def check_connectedness(
        d: MarkovDiagram, k: int = 0, report: Optional[DiagramReport] = None
    ) -> ConnectivityVerdict:
        """
        Hypotheses for a connected, locally connected limit: every production
        quasi-simplicial, every top connected, the start graph connected.

        Vertex-production tops are judged by their glued star when
        ``stars_apply`` holds and by the top itself otherwise.

        Args:
            d: Diagram
            k: Connectivity degree; graphs only support k = 0
            report: Precomputed validation report

        Returns:
            ConnectivityVerdict
        """
        if k != 0:
            raise PreconditionFailed(f"only k = 0 is meaningful for graphs, got k = {k}")
        report = _require_valid(d, report)
        failures: list[Violation] = []

        for p in d.productions:
            classification = report.productions[p.name].classification
            if classification not in QUASI:
                failures.append(
                    Violation(
                        code="NotQuasiSimplicial",
                        message=f"production '{p.name}' is {classification.value}",
                        witness=[p.name],
                    )
                )
        use_stars = TheoremChecker.stars_apply(d)
        for p in d.productions:
            if p.kind is ProductionKind.VERTEX and use_stars:
                star = TheoremChecker.glued_star(d, p)
                connected = nx.is_connected(star) if star.number_of_nodes() else False
                what = "glued star of the top"
            else:
                connected = GraphAlgorithms.is_connected(p.top)
                what = "top"
            if not connected:
                failures.append(
                    Violation(
                        code="TopDisconnected",
                        message=f"{what} of production '{p.name}' is disconnected",
                        witness=[p.name],
                    )
                )
        if not GraphAlgorithms.is_connected(d.start):
            failures.append(
                Violation(
                    code="StartDisconnected",
                    message="start graph is disconnected",
                    witness=[c[0] for c in GraphAlgorithms.connected_components(d.start)],
                )
            )

        verdict = ConnectivityVerdict(
            hypotheses_hold=not failures,
            failures=failures,
            conclusion="connected+locallyConnected" if not failures else "noConclusion",
            vertex_tops="gluedStar" if use_stars else "literal",
        )
        logger.info("Connectedness of %s: %s", d.name, verdict.conclusion)
        return verdict

    @staticmethod
    def is_canonical_vertex_production(vp: Production) -> bool:
        """A single edge over a single vertex, both top vertices colored like the bottom."""
        if not (vp.bottom.is_single_vertex and vp.top.is_single_edge):
            return False
        color = vp.bottom.vertices[0].color
        shape = ColoredGraph.build(
            {"a": color, "b": color}, [("ab", "a", "b", vp.top.edges[0].color)]
        )
        return ComplexOps.colored_isomorphism(vp.top, shape) is not None

    @staticmethod
    def check_dap(d: MarkovDiagram, report: Optional[DiagramReport] = None) -> DapVerdict:
        """
        Hypotheses of the disjoint arcs theorem: elementary diagram, canonical
        vertex productions, connected and biconnected edge-production tops.
        """
        report = _require_valid(d, report)
        failures: list[Violation] = []

        elementary = report.elementary
        if not elementary:
            failures.append(
                Violation(
                    code="NotElementary",
                    message="some production bottom is neither a vertex nor an edge",
                    witness=[p.name for p in d.productions if p.kind is ProductionKind.GENERAL],
                )
            )

        canonical = True
        connected = True
        biconnected = True
        for p in d.productions:
            is_vertex = p.kind is ProductionKind.VERTEX
            if is_vertex and not TheoremChecker.is_canonical_vertex_production(p):
                canonical = False
                failures.append(
                    Violation(
                        code="VertexProductionShape",
                        message=f"vertex production '{p.name}' is not a single edge over a vertex",
                        witness=[p.name],
                    )
                )
            if p.kind is ProductionKind.EDGE:
                result = GraphAlgorithms.is_biconnected(p.top)
                if not result.connected:
                    connected = False
                    failures.append(
                        Violation(
                            code="EdgeTopDisconnected",
                            message=f"top of edge production '{p.name}' is disconnected",
                            witness=[p.name],
                        )
                    )
                if not result.biconnected:
                    biconnected = False
                    failures.append(
                        Violation(
                            code="EdgeTopNotBiconnected",
                            message=f"top of edge production '{p.name}' is not biconnected",
                            witness=[p.name, *result.articulation_points],
                        )
                    )

        holds = elementary and canonical and connected and biconnected
        verdict = DapVerdict(
            elementary=elementary,
            vertex_productions_canonical=canonical,
            edge_tops_connected=connected,
            edge_tops_biconnected=biconnected,
            conclusion="DAP" if holds else "noConclusion",
            failures=failures,
        )
        logger.info("Disjoint arcs hypotheses of %s: %s", d.name, verdict.conclusion)
        return verdict

    @staticmethod
    def pairing_table(d: MarkovDiagram) -> list[PairingFeasibility]:
        """
        For every edge production and every pair of tail/head gluings, which
        pairings of the marked fiber vertices admit disjoint monotone paths.

        Paths may only pass through top vertices lying over the barycenter, so
        each one runs monotonically from the tail fiber to the head fiber.
        """
        roles = DiagramValidator.gluing_roles(d)
        table: list[PairingFeasibility] = []

        def glued_fiber(name: str) -> Optional[tuple[str, str]]:
            gluing = d.gluing_map[name]
            vp = d.production(gluing.src)
            if not TheoremChecker.is_canonical_vertex_production(vp):
                return None
            first, second = _fiber_letters(vp)
            return gluing.top_map[first], gluing.top_map[second]

        for ep in d.productions:
            if ep.kind is not ProductionKind.EDGE:
                continue
            by_role: dict[str, list[str]] = {"tail": [], "head": []}
            for (_, target, role), names in roles.items():
                if target == ep.name:
                    by_role[role].extend(names)
            interior = {t for t, point in ep.map.items() if not point.is_vertex}
            for tail_name in sorted(by_role["tail"]):
                for head_name in sorted(by_role["head"]):
                    tail_fiber, head_fiber = glued_fiber(tail_name), glued_fiber(head_name)
                    if tail_fiber is None or head_fiber is None:
                        continue
                    (a_t, b_t), (a_h, b_h) = tail_fiber, head_fiber
                    straight = GraphAlgorithms.two_disjoint_paths(
                        ep.top, a_t, a_h, b_t, b_h, allowed=interior
                    )
                    crossed = GraphAlgorithms.two_disjoint_paths(
                        ep.top, a_t, b_h, b_t, a_h, allowed=interior
                    )
                    table.append(
                        PairingFeasibility(
                            production=ep.name,
                            tail_gluing=tail_name,
                            head_gluing=head_name,
                            straight=straight is not None,
                            crossed=crossed is not None,
                            straight_paths=straight,
                            crossed_paths=crossed,
                        )
                    )
        return table

    @staticmethod
    def build_sections(
        d: MarkovDiagram, levels: list[LevelState], i: int, report: Optional[DiagramReport] = None
    ) -> SectionPair:
        """
        Construct two disjoint sections ``f, g: K_i -> K_{i+1}`` of the bonding map.

        Every vertex picks which marked fiber vertex (A or B) ``f`` uses; every
        edge then needs the straight pairing when both ends pick the same letter
        and the crossed pairing otherwise. The choices are solved as 2-SAT.

        Raises:
            PreconditionFailed: the disjoint arcs hypotheses do not hold
            IndexOutOfRange: level ``i + 1`` is not expanded
            ConstructionFailed: no consistent choice of fiber letters exists
        """
        verdict = TheoremChecker.check_dap(d, report)
        if verdict.conclusion != "DAP":
            codes = sorted({f.code for f in verdict.failures})
            raise PreconditionFailed(f"disjoint arcs hypotheses fail: {', '.join(codes)}")
        if not 1 <= i < len(levels):
            raise IndexOutOfRange(
                f"sections at level {i} need levels 1..{i + 1}, have {len(levels)}"
            )

        base = levels[i - 1].graph
        decomposition = levels[i].decomposition
        chart = decomposition.chart.by_node
        arcs = {(arc.target, arc.role): arc.gluing for arc in decomposition.assembly.arcs}
        table = TheoremChecker.pairing_table(d)
        feasible = {(row.production, row.tail_gluing, row.head_gluing): row for row in table}

        constraints: dict[str, tuple[str, str, PairingFeasibility]] = {}
        infeasible: list[str] = []
        clauses = []
        for e in base.edges:
            entry = chart[node_key(CellKind.EDGE, e.id)]
            node = entry.node
            tail_gluing, head_gluing = arcs[(node, "tail")], arcs[(node, "head")]
            row = feasible[(entry.production, tail_gluing, head_gluing)]
            ep = d.production(entry.production)
            tail, head = entry.bottom[ep.endpoint("tail")], entry.bottom[ep.endpoint("head")]
            constraints[e.id] = (tail, head, row)
            if row.straight and row.crossed:
                continue
            if row.straight:
                clauses += [((tail, True), (head, False)), ((tail, False), (head, True))]
            elif row.crossed:
                clauses += [((tail, True), (head, True)), ((tail, False), (head, False))]
            else:
                infeasible.append(e.id)

        if infeasible:
            raise ConstructionFailed(
                f"no disjoint pairing inside the tops of {len(infeasible)} edges at level {i}",
                {"level": i, "infeasible_edges": infeasible},
            )
        letters = GraphAlgorithms.solve_two_sat(base.vertex_ids, clauses)
        if letters is None:
            forced = sorted(
                e for e, (_, _, row) in constraints.items() if row.straight != row.crossed
            )
            raise ConstructionFailed(
                f"fiber letters at level {i} admit no consistent choice",
                {"level": i, "infeasible_edges": forced},
            )

        choice = {v: "A" if letters[v] else "B" for v in base.vertex_ids}
        f_vertices: dict[str, str] = {}
        g_vertices: dict[str, str] = {}
        for v in base.vertex_ids:
            entry = chart[node_key(CellKind.VERTEX, v)]
            a, b = (entry.top[x] for x in _fiber_letters(d.production(entry.production)))
            f_vertices[v], g_vertices[v] = (a, b) if letters[v] else (b, a)

        f_paths: dict[str, list[str]] = {}
        g_paths: dict[str, list[str]] = {}
        pairings = {}
        for e in base.edges:
            tail, head, row = constraints[e.id]
            top = chart[node_key(CellKind.EDGE, e.id)].top
            straight = letters[tail] == letters[head]
            pairings[e.id] = "straight" if straight else "crossed"
            from_a, from_b = row.straight_paths if straight else row.crossed_paths
            f_top, g_top = (from_a, from_b) if letters[tail] else (from_b, from_a)
            f_paths[e.id] = [top[x] for x in f_top]
            g_paths[e.id] = [top[x] for x in g_top]

        logger.info(
            "Sections at level %d of %s: %s", i, d.name, dict(Counter(pairings.values()))
        )
        return SectionPair(
            level=i,
            fiber_choice=choice,
            f_vertices=f_vertices,
            g_vertices=g_vertices,
            f_paths=f_paths,
            g_paths=g_paths,
            pairings=pairings,
            feasibility=table,
        )

    @staticmethod
    def _check_section(
        label: str,
        base: ColoredGraph,
        fine: ColoredGraph,
        image: dict,
        vertices: dict[str, str],
        paths: dict[str, list[str]],
    ) -> tuple[list[Violation], set[str]]:
        found: list[Violation] = []
        used: Counter = Counter()
        for v in base.vertex_ids:
            target = vertices.get(v)
            if target is None or not fine.has_vertex(target):
                found.append(
                    Violation(
                        code="MissingCell", message=f"{label} misses vertex '{v}'", witness=[v]
                    )
                )
                continue
            used[target] += 1
            if str(image.get(target)) != f"v:{v}":
                found.append(
                    Violation(
                        code="NotSection",
                        message=f"{label}({v}) = {target} lies over {image.get(target)}",
                        witness=[v, target],
                    )
                )

        for e in base.edges:
            path = paths.get(e.id)
            if not path:
                found.append(
                    Violation(
                        code="MissingCell", message=f"{label} misses edge '{e.id}'", witness=[e.id]
                    )
                )
                continue
            ends = {vertices.get(e.ends[0]), vertices.get(e.ends[1])}
            if {path[0], path[-1]} != ends or len(path) < 2:
                found.append(
                    Violation(
                        code="NotSection",
                        message=f"{label} path over '{e.id}' does not join the images of its ends",
                        witness=[e.id],
                    )
                )
            if len(set(path)) != len(path):
                found.append(
                    Violation(
                        code="NotInjective",
                        message=f"{label} path over '{e.id}' repeats a vertex",
                        witness=[e.id],
                    )
                )
            for a, b in zip(path, path[1:]):
                if fine.edge_between(a, b) is None:
                    found.append(
                        Violation(
                            code="NotAdjacent",
                            message=f"{label} path over '{e.id}' jumps from {a} to {b}",
                            witness=[e.id, a, b],
                        )
                    )
            for x in path[1:-1]:
                used[x] += 1
                if str(image.get(x)) != f"bary:{e.id}":
                    found.append(
                        Violation(
                            code="NotMonotone",
                            message=f"{label} path over '{e.id}' passes {x} over {image.get(x)}",
                            witness=[e.id, x],
                        )
                    )

        for x, count in sorted(used.items()):
            if count > 1:
                found.append(
                    Violation(
                        code="NotInjective", message=f"{label} hits {x} {count} times", witness=[x]
                    )
                )
        covered = set(vertices.values())
        for path in paths.values():
            covered.update(path)
        return found, covered

    @staticmethod
    def verify_sections(levels: list[LevelState], pair: SectionPair) -> SectionCheck:
        """
        Re-check a section pair from the level data alone: section property,
        monotone adjacent paths, injectivity, and disjointness of the two images.
        """
        i = pair.level
        if not 1 <= i < len(levels):
            raise IndexOutOfRange(f"sections at level {i} need levels 1..{i + 1}")
        base, fine = levels[i - 1].graph, levels[i].graph
        image = levels[i].decomposition.bonding.vertex_image

        f_found, f_cover = TheoremChecker._check_section(
            "f", base, fine, image, pair.f_vertices, pair.f_paths
        )
        g_found, g_cover = TheoremChecker._check_section(
            "g", base, fine, image, pair.g_vertices, pair.g_paths
        )
        violations = [*f_found, *g_found]
        for x in sorted(f_cover & g_cover):
            violations.append(
                Violation(code="NotDisjoint", message=f"f and g both pass {x}", witness=[x])
            )
        return SectionCheck(level=i, ok=not violations, violations=violations)

    @staticmethod
    def certify(
        d: MarkovDiagram,
        depth: int,
        schedule: Optional[MetricSchedule] = None,
        with_metrics: bool = True,
        timestamp: bool = False,
        levels: Optional[list[LevelState]] = None,
    ) -> Certificate:
        """
        Combine the hypothesis checks with finite-level facts into a certificate.

        Args:
            d: Diagram
            depth: Levels to expand for the finite facts, sections and metrics
            schedule: Scale schedule for the metric summary (halving by default)
            with_metrics: Include the Lipschitz/mesh summary
            timestamp: Record the issue time
            levels: Already expanded levels to reuse

        Returns:
            Certificate labeled MengerCurve only when every condition holds
        """
        if depth < 1:
            raise PreconditionFailed(f"depth must be at least 1, got {depth}")
        report = _require_valid(d, None)
        connectivity = TheoremChecker.check_connectedness(d, report=report)
        dap = TheoremChecker.check_dap(d, report=report)

        if levels is None:
            if report.expandable:
                levels = ExpansionEngine(d, report).expand(depth)
            else:
                levels = [LevelState(index=1, graph=d.start)]
        levels = levels[:depth]

        if dap.conclusion == "DAP" and report.expandable:
            witness = []
            for i in range(1, len(levels)):
                try:
                    pair = TheoremChecker.build_sections(d, levels, i, report)
                except MarkovError as e:
                    witness.append(SectionSummary(level=i, ok=False, detail=str(e)))
                    continue
                check = TheoremChecker.verify_sections(levels, pair)
                witness.append(
                    SectionSummary(
                        level=i,
                        ok=check.ok,
                        pairings_used=dict(sorted(Counter(pair.pairings.values()).items())),
                        detail="; ".join(v.message for v in check.violations[:5]),
                    )
                )
            dap = dap.model_copy(update={"section_witness": witness})

        facts = CompactnessFacts(
            levels_finite=all(state.graph.vertices for state in levels),
            depth=len(levels),
            level_counts=[state.graph.counts for state in levels],
            at_least_two_points=bool(d.start.edges)
            or any(len(state.graph.vertices) >= 2 for state in levels),
        )

        properties = []
        if connectivity.conclusion == "connected+locallyConnected":
            properties += ["connected", "locallyConnected"]
        if dap.conclusion == "DAP":
            properties.append("disjointArcs")

        menger = (
            facts.levels_finite
            and facts.at_least_two_points
            and connectivity.conclusion == "connected+locallyConnected"
            and dap.conclusion == "DAP"
        )
        label = "MengerCurve" if menger else ("propertiesList" if properties else "inconclusive")

        metrics = None
        if with_metrics and len(levels) > 1 and report.expandable:
            metrics = LimitMetrics.summary(d, levels, schedule or MetricSchedule())

        issued_at = None
        if timestamp:
            issued_at = datetime.now(timezone.utc).isoformat(timespec="seconds")
        certificate = Certificate(
            schema_version=CERTIFICATE_SCHEMA,
            tool_version=TOOL_VERSION,
            diagram_name=d.name,
            diagram_hash=DiagramCodec.content_hash(d),
            depth=len(levels),
            connectivity=connectivity,
            dap=dap,
            facts=facts,
            label=label,
            properties=properties,
            metrics=metrics,
            issued_at=issued_at,
        )
        logger.info("Certified %s at depth %d: %s", d.name, len(levels), label)
        return certificate
