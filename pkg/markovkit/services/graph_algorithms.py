"""Connectivity, biconnectivity, disjoint paths and 2-SAT on small graphs."""

import logging
from itertools import islice
from typing import Optional

import networkx as nx

from markovkit.config import EXHAUSTIVE_PATH_LIMIT, LARGE_PATH_CANDIDATES
from markovkit.errors import PreconditionFailed, UnknownVertex
from markovkit.models.complex import ColoredGraph
from markovkit.models.verdicts import BiconnectivityResult

logger = logging.getLogger(__name__)

PathPair = tuple[list[str], list[str]]

# A 2-SAT literal: (variable, polarity).
Literal2 = tuple[str, bool]


class GraphAlgorithms:
    """Graph algorithms over ``ColoredGraph``, backed by networkx."""

    @staticmethod
    def connected_components(g: ColoredGraph) -> list[list[str]]:
        """Maximal connected vertex sets, each sorted, ordered by least member."""
        components = [sorted(c) for c in nx.connected_components(g.nx_graph)]
        return sorted(components, key=lambda c: c[0])

    @staticmethod
    def is_connected(g: ColoredGraph) -> bool:
        return bool(g.vertices) and nx.is_connected(g.nx_graph)

    @staticmethod
    def is_biconnected(g: ColoredGraph) -> BiconnectivityResult:
        """
        Biconnectivity with articulation vertices.

        A single edge counts as biconnected; a single vertex does not.
        """
        connected = GraphAlgorithms.is_connected(g)
        articulation = sorted(nx.articulation_points(g.nx_graph))
        big_enough = len(g.vertices) >= 3 or g.is_single_edge
        return BiconnectivityResult(
            biconnected=connected and big_enough and not articulation,
            connected=connected,
            articulation_points=articulation,
        )

    @staticmethod
    def _ordered_paths(graph: nx.Graph, source: str, target: str) -> list[list[str]]:
        """All simple paths, shortest first, ties broken lexicographically."""
        if source not in graph or target not in graph:
            return []
        return sorted(nx.all_simple_paths(graph, source, target), key=lambda p: (len(p), p))

    @staticmethod
    def _shortest_path(graph: nx.Graph, source: str, target: str) -> Optional[list[str]]:
        if source not in graph or target not in graph:
            return None
        try:
            paths = nx.all_shortest_paths(graph, source, target)
            return min(paths)
        except nx.NetworkXNoPath:
            return None

    @staticmethod
    def two_disjoint_paths(
        g: ColoredGraph,
        s1: str,
        t1: str,
        s2: str,
        t2: str,
        allowed: Optional[set[str]] = None,
    ) -> Optional[PathPair]:
        """
        Two vertex-disjoint simple paths ``s1 -> t1`` and ``s2 -> t2``.

        Args:
            g: Graph to search
            s1, t1, s2, t2: Four distinct vertices
            allowed: Restrict the search to these vertices (terminals always allowed)

        Returns:
            The first pair in (shortest first path, lexicographic) order, or None
        """
        terminals = [s1, t1, s2, t2]
        for v in terminals:
            if not g.has_vertex(v):
                raise UnknownVertex(v)
        if len(set(terminals)) != 4:
            raise PreconditionFailed(f"terminals must be distinct, got {terminals}")

        graph = g.nx_graph
        if allowed is not None:
            graph = graph.subgraph(set(allowed) | set(terminals))

        if graph.number_of_nodes() > EXHAUSTIVE_PATH_LIMIT:
            return GraphAlgorithms._flow_paths(graph, s1, t1, s2, t2)

        first_graph = graph.subgraph(set(graph) - {s2, t2})
        for first in GraphAlgorithms._ordered_paths(first_graph, s1, t1):
            rest = graph.subgraph(set(graph) - set(first))
            second = GraphAlgorithms._shortest_path(rest, s2, t2)
            if second is not None:
                return first, second
        return None

    @staticmethod
    def _flow_paths(graph: nx.Graph, s1: str, t1: str, s2: str, t2: str) -> Optional[PathPair]:
        """
        Search for large graphs.

        A vertex flow from {s1, s2} to {t1, t2} settles the set version: fewer
        than two disjoint paths means no pairing is possible. When the flow
        pairs the terminals the other way, up to ``LARGE_PATH_CANDIDATES``
        paths ``s1 -> t1`` (shortest first) are tried against a shortest
        ``s2 -> t2`` in the rest. None past that point means "not found", not
        "impossible".
        """
        aux = nx.Graph(graph)
        source, sink = ("__source__", "__sink__")
        aux.add_edges_from([(source, s1), (source, s2), (t1, sink), (t2, sink)])
        paths = list(islice(nx.node_disjoint_paths(aux, source, sink), 2))
        if len(paths) < 2:
            return None
        trimmed = sorted(p[1:-1] for p in paths)
        by_start = {p[0]: p for p in trimmed}
        first, second = by_start.get(s1), by_start.get(s2)
        if first is not None and second is not None and first[-1] == t1 and second[-1] == t2:
            return first, second

        first_graph = graph.subgraph(set(graph) - {s2, t2})
        if s1 in first_graph and t1 in first_graph and nx.has_path(first_graph, s1, t1):
            candidates = nx.shortest_simple_paths(first_graph, s1, t1)
            for first in islice(candidates, LARGE_PATH_CANDIDATES):
                rest = graph.subgraph(set(graph) - set(first))
                second = GraphAlgorithms._shortest_path(rest, s2, t2)
                if second is not None:
                    return first, second
        logger.warning(
            "Disjoint path search on %d vertices is not exhaustive; pairing %s->%s, %s->%s "
            "not found among %d candidates",
            graph.number_of_nodes(),
            s1,
            t1,
            s2,
            t2,
            LARGE_PATH_CANDIDATES,
        )
        return None

    @staticmethod
    def solve_two_sat(
        variables: list[str], clauses: list[tuple[Literal2, Literal2]]
    ) -> Optional[dict[str, bool]]:
        """
        Solve a 2-SAT instance through the strongly connected components of its
        implication graph.

        Args:
            variables: Variable names
            clauses: Disjunctions ``(a or b)`` of two literals

        Returns:
            A satisfying assignment, or None when unsatisfiable
        """
        implications = nx.DiGraph()
        for v in variables:
            implications.add_nodes_from([(v, True), (v, False)])
        for (a, pa), (b, pb) in clauses:
            implications.add_edge((a, not pa), (b, pb))
            implications.add_edge((b, not pb), (a, pa))

        condensed = nx.condensation(implications)
        component = condensed.graph["mapping"]
        for v in variables:
            if component[(v, True)] == component[(v, False)]:
                return None

        # x is true when its component comes after not-x in topological order.
        order = {c: i for i, c in enumerate(nx.topological_sort(condensed))}
        return {v: order[component[(v, True)]] > order[component[(v, False)]] for v in variables}
