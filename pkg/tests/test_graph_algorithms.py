"""Components, biconnectivity and vertex-disjoint paths."""

import pytest

from markovkit.config import EXHAUSTIVE_PATH_LIMIT
from markovkit.errors import PreconditionFailed, UnknownVertex
from markovkit.models.complex import ColoredGraph
from markovkit.services.graph_algorithms import GraphAlgorithms


def cycle(n: int) -> ColoredGraph:
    ids = [f"c{i:02d}" for i in range(n)]
    pairs = [(ids[i], ids[(i + 1) % n]) for i in range(n)]
    return ColoredGraph.build(ids, [(f"{a}-{b}", a, b) for a, b in pairs])


def assert_disjoint_pair(graph: ColoredGraph, pair, s1, t1, s2, t2) -> None:
    first, second = pair
    assert (first[0], first[-1]) == (s1, t1)
    assert (second[0], second[-1]) == (s2, t2)
    assert not set(first) & set(second)
    for path in pair:
        for a, b in zip(path, path[1:]):
            assert graph.nx_graph.has_edge(a, b)


@pytest.fixture(scope="module")
def eight(one_eight):
    return one_eight.production("P8").top


class TestComponents:
    def test_connected_top(self, eight):
        assert GraphAlgorithms.connected_components(eight) == [["A", "B", "C", "D", "E", "F"]]
        assert GraphAlgorithms.is_connected(eight)

    def test_isolated_vertices(self):
        g = ColoredGraph.build(["b", "a"])
        assert GraphAlgorithms.connected_components(g) == [["a"], ["b"]]
        assert not GraphAlgorithms.is_connected(g)

    def test_ordered_by_least_member(self):
        g = ColoredGraph.build(["z", "a", "m", "b"], [("z-a", "z", "a"), ("m-b", "m", "b")])
        assert GraphAlgorithms.connected_components(g) == [["a", "z"], ["b", "m"]]

    def test_cantor_level(self, builtin_levels):
        assert len(GraphAlgorithms.connected_components(builtin_levels["cantor"][3].graph)) == 8

    def test_empty_graph(self):
        g = ColoredGraph.build([])
        assert GraphAlgorithms.connected_components(g) == []
        assert not GraphAlgorithms.is_connected(g)


class TestBiconnectivity:
    def test_eight_top(self, eight):
        result = GraphAlgorithms.is_biconnected(eight)
        assert result.biconnected
        assert result.articulation_points == []

    def test_path_has_articulation_point(self):
        g = ColoredGraph.build(
            ["p0", "p1", "p2"], [("p0-p1", "p0", "p1"), ("p1-p2", "p1", "p2")]
        )
        result = GraphAlgorithms.is_biconnected(g)
        assert result.connected
        assert not result.biconnected
        assert result.articulation_points == ["p1"]

    @pytest.mark.parametrize(
        "graph, expected",
        [
            (cycle(3), True),
            (ColoredGraph.build(["a", "b"], [("a-b", "a", "b")]), True),
            (ColoredGraph.build(["a"]), False),
            (ColoredGraph.build([]), False),
            (ColoredGraph.build(["a", "b", "c"], [("a-b", "a", "b")]), False),
        ],
        ids=["triangle", "single-edge", "single-vertex", "empty", "disconnected"],
    )
    def test_small_graphs(self, graph, expected):
        assert GraphAlgorithms.is_biconnected(graph).biconnected is expected


class TestDisjointPaths:
    def test_eight_uncrossed(self, eight):
        pair = GraphAlgorithms.two_disjoint_paths(eight, "D", "B", "E", "A")
        assert pair == (["D", "C", "B"], ["E", "F", "A"])

    def test_eight_crossed(self, eight):
        assert GraphAlgorithms.two_disjoint_paths(eight, "D", "A", "E", "B") is None

    def test_square(self):
        g = cycle(4)
        pair = GraphAlgorithms.two_disjoint_paths(g, "c00", "c01", "c03", "c02")
        assert pair == (["c00", "c01"], ["c03", "c02"])
        assert GraphAlgorithms.two_disjoint_paths(g, "c00", "c02", "c01", "c03") is None

    def test_allowed_restricts_search(self, eight):
        pair = GraphAlgorithms.two_disjoint_paths(
            eight, "D", "B", "E", "A", allowed={"C", "F"}
        )
        assert pair == (["D", "C", "B"], ["E", "F", "A"])
        assert GraphAlgorithms.two_disjoint_paths(eight, "D", "B", "E", "A", allowed={"C"}) is None

    def test_terminals_must_be_distinct(self, eight):
        with pytest.raises(PreconditionFailed):
            GraphAlgorithms.two_disjoint_paths(eight, "D", "B", "D", "A")

    def test_unknown_terminal(self, eight):
        with pytest.raises(UnknownVertex):
            GraphAlgorithms.two_disjoint_paths(eight, "D", "B", "E", "Z")


class TestLargeGraphs:
    """Rings longer than the exhaustive search limit."""

    @pytest.fixture(scope="class")
    def ring(self):
        g = cycle(24)
        assert len(g.vertices) > EXHAUSTIVE_PATH_LIMIT
        return g

    @pytest.mark.parametrize(
        "terminals",
        [("c00", "c06", "c12", "c18"), ("c00", "c18", "c12", "c06")],
        ids=["forward", "backward"],
    )
    def test_both_pairings_found(self, ring, terminals):
        # Both requests share one flow, so one of them must be re-paired.
        pair = GraphAlgorithms.two_disjoint_paths(ring, *terminals)
        assert pair is not None
        assert_disjoint_pair(ring, pair, *terminals)

    def test_interleaved_terminals(self, ring):
        assert GraphAlgorithms.two_disjoint_paths(ring, "c00", "c12", "c06", "c18") is None
