"""Metric analysis of finite prefixes: schedules, mesh, Lipschitz checks, threads."""

import logging
from fractions import Fraction
from typing import Optional

import networkx as nx

from markovkit.config import DEFAULT_KAPPA, DEFAULT_THREAD_LIMIT, LIPSCHITZ_REPORT_CAP
from markovkit.errors import DivergentTail, IndexOutOfRange, MarkovError, PreconditionFailed
from markovkit.models.complex import GeodesicScale, GraphPoint
from markovkit.models.diagram import MarkovDiagram
from markovkit.models.expansion import LevelState
from markovkit.models.metrics import (
    ComponentCount,
    DistanceBound,
    LipschitzReport,
    LipschitzViolation,
    MeshBound,
    MetricSchedule,
    MetricSummary,
    Thread,
    ThreadCell,
    ThreadCheck,
    ThreadEnumeration,
)
from markovkit.services.complex_ops import ComplexOps
from markovkit.services.diagram_checks import DiagramValidator
from markovkit.services.graph_algorithms import GraphAlgorithms

logger = logging.getLogger(__name__)


class LimitMetrics:
    """Metric checks over expanded levels. All arithmetic is exact."""

    @staticmethod
    def parse_schedule(text: str, kappa: Fraction | str | int = DEFAULT_KAPPA) -> MetricSchedule:
        """
        Parse ``halving``, ``constant`` or ``list:k1,k2,...``.

        Args:
            text: Schedule rule
            kappa: kappa_1 for the halving and constant rules

        Returns:
            MetricSchedule
        """
        text = text.strip()
        if text in ("halving", "constant"):
            return MetricSchedule(rule=text, kappa1=kappa)
        if text.startswith("list:"):
            values = [item.strip() for item in text[len("list:") :].split(",") if item.strip()]
            if not values:
                raise PreconditionFailed("list schedule needs at least one value")
            return MetricSchedule(rule="custom", kappa1=values[0], values=values)
        raise PreconditionFailed(f"unknown schedule {text!r}; use halving, constant or list:...")

    @staticmethod
    def top_diameters(diagram: MarkovDiagram) -> dict[str, int]:
        return {p.name: ComplexOps.diameter(p.top) for p in diagram.productions}

    @staticmethod
    def mesh_bound(
        diagram: MarkovDiagram, levels: list[LevelState], schedule: MetricSchedule, i: int
    ) -> MeshBound:
        """
        ``kappa_i`` times the largest diameter among the tops assigned at level ``i``.

        The tail is the exact sum of the bounds past ``i`` using the largest top
        diameter of the whole diagram; constant schedules are reported divergent.
        """
        if not 1 <= i <= len(levels):
            raise IndexOutOfRange(f"level {i} not expanded (have 1..{len(levels)})")
        diameters = LimitMetrics.top_diameters(diagram)
        table = DiagramValidator.signature_table(diagram)
        assigned = {
            name
            for signature in DiagramValidator.graph_signatures(levels[i - 1].graph)
            for name in table.get(signature, [])
        }
        diameter = max((diameters[name] for name in assigned), default=0)
        kappa = schedule.kappa(i)

        widest = max(diameters.values(), default=0)
        tail_sum = schedule.tail_sum(i)
        tail = None if tail_sum is None else widest * tail_sum
        return MeshBound(
            level=i,
            kappa=kappa,
            diameter=diameter,
            mesh=kappa * diameter,
            tail=tail,
            divergent=tail is None,
        )

    @staticmethod
    def mesh_table(
        diagram: MarkovDiagram, levels: list[LevelState], schedule: MetricSchedule
    ) -> list[MeshBound]:
        return [
            LimitMetrics.mesh_bound(diagram, levels, schedule, i) for i in range(1, len(levels) + 1)
        ]

    @staticmethod
    def check_lipschitz(
        levels: list[LevelState], schedule: MetricSchedule, cap: int = LIPSCHITZ_REPORT_CAP
    ) -> LipschitzReport:
        """
        Exhaustively check that every bonding map is 1-Lipschitz.

        For each pair of vertices of ``K_{i+1}`` the distance of their images in
        ``K_i`` (measured in the subdivision, half-edges of length ``kappa_i / 2``)
        must not exceed their own distance.

        Args:
            levels: At least two expanded levels
            schedule: Scale schedule
            cap: Number of violations kept in the report

        Returns:
            LipschitzReport with the first ``cap`` violations in sorted pair order
        """
        if len(levels) < 2:
            raise PreconditionFailed("Lipschitz check needs at least two levels")
        violations: list[LipschitzViolation] = []
        count = 0
        checked = 0

        for coarse_state, fine_state in zip(levels, levels[1:]):
            coarse, fine = coarse_state.graph, fine_state.graph
            bonding = fine_state.decomposition.bonding
            kappa_coarse = schedule.kappa(coarse_state.index)
            kappa_fine = schedule.kappa(fine_state.index)
            coarse_hops = dict(nx.all_pairs_shortest_path_length(coarse.nx_graph))

            images = {
                v: ComplexOps.subdivision_point(coarse, bonding.vertex_image[v])
                for v in fine.vertex_ids
            }
            # Bonding images are vertices or barycenters: half-edge units are integral.
            exits = {
                v: [(end, int(2 * lead)) for end, lead in ComplexOps.exits(coarse, p)]
                for v, p in images.items()
            }
            ratio = 2 * kappa_fine / kappa_coarse
            thresholds: dict[int, Fraction] = {}

            order = fine.vertex_ids
            for index, u in enumerate(order):
                fine_hops = nx.single_source_shortest_path_length(fine.nx_graph, u)
                for v in order[index + 1 :]:
                    checked += 1
                    hops = fine_hops.get(v)
                    if hops is None:
                        continue
                    halves = LimitMetrics._image_halves(
                        images[u], images[v], exits[u], exits[v], coarse_hops
                    )
                    if hops not in thresholds:
                        thresholds[hops] = ratio * hops
                    if halves is not None and halves <= thresholds[hops]:
                        continue
                    count += 1
                    if len(violations) < cap:
                        violations.append(
                            LipschitzViolation(
                                level=coarse_state.index,
                                u=u,
                                v=v,
                                domain_distance=kappa_fine * hops,
                                image_distance=(
                                    None if halves is None else kappa_coarse * halves / 2
                                ),
                            )
                        )

        logger.info("Lipschitz check: %d pairs, %d violations", checked, count)
        return LipschitzReport(
            ok=count == 0,
            checked_pairs=checked,
            violations=violations,
            violation_count=count,
            truncated=count > cap,
        )

    @staticmethod
    def _image_halves(
        p: GraphPoint,
        q: GraphPoint,
        p_exits: list[tuple[str, int]],
        q_exits: list[tuple[str, int]],
        hops: dict[str, dict[str, int]],
    ) -> Optional[int]:
        """Distance of two bonding images in half-edges of the coarse level."""
        best: Optional[int] = None
        if p.kind == "edge" and q.kind == "edge" and p.cell == q.cell:
            best = int(2 * abs(p.offset - q.offset))
        for start, lead in p_exits:
            reach = hops.get(start, {})
            for end, trail in q_exits:
                if end in reach:
                    candidate = lead + 2 * reach[end] + trail
                    if best is None or candidate < best:
                        best = candidate
        return best

    @staticmethod
    def _carrier(point: GraphPoint, level: int) -> ThreadCell:
        return ThreadCell(level=level, kind=point.kind, cell=point.cell)

    @staticmethod
    def enumerate_threads(
        levels: list[LevelState], depth: int, limit: int = DEFAULT_THREAD_LIMIT
    ) -> ThreadEnumeration:
        """
        Threads ending at the vertices of level ``depth``, in address order.

        Each thread is verified before it is returned.
        """
        if not 1 <= depth <= len(levels):
            raise IndexOutOfRange(f"depth {depth} not expanded (have 1..{len(levels)})")
        if limit < 1:
            raise PreconditionFailed("thread limit must be positive")
        ends = levels[depth - 1].graph.vertex_ids
        threads = []
        for vertex in ends[:limit]:
            points = [GraphPoint(kind="vertex", cell=vertex)]
            for index in range(depth, 1, -1):
                bonding = levels[index - 1].decomposition.bonding
                points.append(ComplexOps.push_point(bonding, points[-1]))
            points.reverse()
            thread = Thread(
                cells=[LimitMetrics._carrier(p, k + 1) for k, p in enumerate(points)],
                points=points,
            )
            check = LimitMetrics.verify_thread(levels, thread)
            if not check.ok:
                raise PreconditionFailed(f"thread through {vertex} is inconsistent: {check.detail}")
            threads.append(thread)

        truncated = len(ends) > limit
        if truncated:
            logger.info("Thread enumeration truncated at %d of %d", limit, len(ends))
        return ThreadEnumeration(depth=depth, threads=threads, total=len(ends), truncated=truncated)

    @staticmethod
    def verify_thread(levels: list[LevelState], thread: Thread) -> ThreadCheck:
        """Check that each point maps onto its predecessor and sits in its recorded cell."""
        if thread.depth > len(levels) or len(thread.cells) != thread.depth or not thread.depth:
            return ThreadCheck(ok=False, detail="thread does not fit the expanded levels")
        for k, (point, cell) in enumerate(zip(thread.points, thread.cells)):
            level = k + 1
            graph = levels[k].graph
            try:
                normal = ComplexOps.normalize_point(graph, point)
            except MarkovError as e:
                return ThreadCheck(ok=False, failed_level=level, detail=str(e))
            if (cell.level, cell.kind, cell.cell) != (level, normal.kind, normal.cell):
                return ThreadCheck(
                    ok=False,
                    failed_level=level,
                    detail=f"cell {cell.kind}:{cell.cell} does not carry point {normal}",
                )
            if level > 1:
                bonding = levels[k].decomposition.bonding
                image = ComplexOps.push_point(bonding, normal)
                previous = ComplexOps.normalize_point(levels[k - 1].graph, thread.points[k - 1])
                if image != previous:
                    return ThreadCheck(
                        ok=False,
                        failed_level=level,
                        detail=f"{normal} maps to {image}, thread has {previous}",
                    )
        return ThreadCheck(ok=True)

    @staticmethod
    def distance_bounds(
        a: Thread,
        b: Thread,
        i: int,
        schedule: MetricSchedule,
        levels: list[LevelState],
        top_diameter: int,
    ) -> DistanceBound:
        """
        Bounds on the limit distance of two threads from their level-``i`` points.

        Raises:
            DivergentTail: the schedule has no finite tail
        """
        if i < 1 or a.depth < i or b.depth < i or len(levels) < i:
            raise IndexOutOfRange(f"both threads must reach level {i}")
        tail_sum = schedule.tail_sum(i)
        if tail_sum is None:
            raise DivergentTail(f"schedule {schedule.label()} has no finite tail")
        tail = top_diameter * tail_sum
        kappa = schedule.kappa(i)
        distance = ComplexOps.point_distance(
            levels[i - 1].graph, GeodesicScale(kappa=kappa), a.points[i - 1], b.points[i - 1]
        )
        if distance is None:
            return DistanceBound(level=i, lower=kappa, upper=None, tail=tail, separated=True)
        return DistanceBound(
            level=i,
            lower=max(Fraction(0), distance - 2 * tail),
            upper=distance + 2 * tail,
            tail=tail,
        )

    @staticmethod
    def component_counts(levels: list[LevelState]) -> list[ComponentCount]:
        """Components per level, a finite-stage proxy for epsilon-connectivity."""
        return [
            ComponentCount(
                level=state.index,
                components=len(GraphAlgorithms.connected_components(state.graph)),
            )
            for state in levels
        ]

    @staticmethod
    def summary(
        diagram: MarkovDiagram, levels: list[LevelState], schedule: MetricSchedule
    ) -> MetricSummary:
        lipschitz = LimitMetrics.check_lipschitz(levels, schedule) if len(levels) > 1 else None
        return MetricSummary(
            schedule=schedule.label(),
            lipschitz_ok=lipschitz.ok if lipschitz else True,
            lipschitz_violations=lipschitz.violation_count if lipschitz else 0,
            first_violation=lipschitz.violations[0] if lipschitz and lipschitz.violations else None,
            mesh=LimitMetrics.mesh_table(diagram, levels, schedule),
            tail_finite=schedule.tail_finite,
            components=LimitMetrics.component_counts(levels),
        )
