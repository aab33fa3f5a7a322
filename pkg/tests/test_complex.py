"""Colored graphs, subdivision, map classification and point distances."""

from fractions import Fraction

import pytest

from markovkit.errors import UnknownVertex
from markovkit.models.complex import (
    ColoredEmbedding,
    ColoredGraph,
    EdgeShape,
    GeodesicScale,
    GraphPoint,
    MapClass,
    QuasiSimplicialMap,
    SubdivisionPoint,
)
from markovkit.services.complex_ops import ComplexOps


def edge_graph(color: int = 0) -> ColoredGraph:
    return ColoredGraph.build({"l": 0, "r": 0}, [("e", "l", "r", color)])


def path_graph(n: int) -> ColoredGraph:
    ids = [f"p{i}" for i in range(n)]
    return ColoredGraph.build(ids, [(f"p{i}-p{i + 1}", f"p{i}", f"p{i + 1}") for i in range(n - 1)])


class TestValidateGraph:
    def test_valid_graph(self):
        assert ComplexOps.validate_graph(path_graph(4)).ok

    def test_dangling_endpoint(self):
        g = ColoredGraph.build(["a"], [("e", "a", "z")])
        result = ComplexOps.validate_graph(g)
        assert not result.ok
        assert result.violations[0].code == "DanglingEndpoint"
        assert result.violations[0].witness == ["e", "z"]

    def test_self_loop_and_duplicate_edge(self):
        g = ColoredGraph.build(["a", "b"], [("e1", "a", "b"), ("e2", "b", "a"), ("e3", "a", "a")])
        codes = {v.code for v in ComplexOps.validate_graph(g).violations}
        assert codes == {"DuplicateEdge", "SelfLoop"}

    def test_vertex_and_edge_share_namespace(self):
        g = ColoredGraph.build(["a", "b"], [("a", "a", "b")])
        codes = [v.code for v in ComplexOps.validate_graph(g).violations]
        assert codes == ["DuplicateId"]

    def test_cells_are_sorted(self):
        g = ColoredGraph.build(["z", "a", "m"])
        assert g.vertex_ids == ["a", "m", "z"]


class TestSubdivision:
    def test_counts(self):
        sub = ComplexOps.barycentric_subdivide(path_graph(4))
        assert sub.graph.counts == (4 + 3, 6)

    def test_halves_keep_color(self):
        sub = ComplexOps.barycentric_subdivide(edge_graph(color=2))
        assert sub.points["bary:e"] == SubdivisionPoint.barycenter("e")
        assert {e.id for e in sub.graph.edges} == {"e.0", "e.1"}
        assert all(e.color == 2 for e in sub.graph.edges)
        assert sub.graph.vertex_colors["bary:e"] == 2

    def test_edge_free_graph_unchanged(self):
        g = ColoredGraph.build(["a", "b"])
        assert ComplexOps.barycentric_subdivide(g).graph.counts == (2, 0)


class TestClassifyMap:
    def test_quasi_simplicial(self):
        top = path_graph(3)
        m = QuasiSimplicialMap(
            domain=top,
            codomain=edge_graph(),
            vertex_image={
                "p0": SubdivisionPoint.vertex("l"),
                "p1": SubdivisionPoint.barycenter("e"),
                "p2": SubdivisionPoint.vertex("r"),
            },
        )
        result = ComplexOps.classify_map(m)
        assert result.classification is MapClass.QUASI_SIMPLICIAL
        assert set(result.edge_shapes.values()) == {EdgeShape.HALF}

    def test_simplicial(self):
        m = QuasiSimplicialMap(
            domain=path_graph(2),
            codomain=edge_graph(),
            vertex_image={"p0": SubdivisionPoint.vertex("l"), "p1": SubdivisionPoint.vertex("r")},
        )
        assert ComplexOps.classify_map(m).classification is MapClass.SIMPLICIAL

    def test_collapse_is_both(self):
        m = QuasiSimplicialMap(
            domain=path_graph(2),
            codomain=edge_graph(),
            vertex_image={"p0": SubdivisionPoint.vertex("l"), "p1": SubdivisionPoint.vertex("l")},
        )
        result = ComplexOps.classify_map(m)
        assert result.classification is MapClass.BOTH
        assert result.edge_shapes == {"p0-p1": EdgeShape.DEGENERATE}

    def test_missing_image_is_invalid(self):
        m = QuasiSimplicialMap(
            domain=path_graph(2),
            codomain=edge_graph(),
            vertex_image={"p0": SubdivisionPoint.vertex("l")},
        )
        result = ComplexOps.classify_map(m)
        assert result.classification is MapClass.INVALID
        assert result.violations[0].witness == ["p1"]

    def test_mixed_full_edge_and_barycenter_is_invalid(self):
        m = QuasiSimplicialMap(
            domain=path_graph(3),
            codomain=edge_graph(),
            vertex_image={
                "p0": SubdivisionPoint.vertex("l"),
                "p1": SubdivisionPoint.vertex("r"),
                "p2": SubdivisionPoint.barycenter("e"),
            },
        )
        assert ComplexOps.classify_map(m).classification is MapClass.INVALID

    def test_subdivision_point_text_form(self):
        assert str(SubdivisionPoint.model_validate("bary:e")) == "bary:e"
        with pytest.raises(ValueError):
            SubdivisionPoint.model_validate("edge:e")


class TestEmbeddings:
    def test_colored_embedding(self):
        m = ColoredEmbedding(
            domain=edge_graph(), codomain=path_graph(3), vertex_map={"l": "p0", "r": "p1"}
        )
        assert ComplexOps.check_colored_embedding(m).ok

    def test_not_injective(self):
        m = ColoredEmbedding(
            domain=ColoredGraph.build(["a", "b"]),
            codomain=path_graph(2),
            vertex_map={"a": "p0", "b": "p0"},
        )
        codes = [v.code for v in ComplexOps.check_colored_embedding(m).violations]
        assert codes == ["NotInjective"]

    def test_color_mismatch(self):
        m = ColoredEmbedding(
            domain=edge_graph(color=1),
            codomain=path_graph(2),
            vertex_map={"l": "p0", "r": "p1"},
        )
        codes = [v.code for v in ComplexOps.check_colored_embedding(m).violations]
        assert codes == ["ColorMismatch"]

    def test_isomorphism_respects_colors(self):
        a = ColoredGraph.build({"x": 0, "y": 1}, [("xy", "x", "y")])
        b = ColoredGraph.build({"u": 1, "w": 0}, [("uw", "u", "w")])
        iso = ComplexOps.colored_isomorphism(a, b)
        assert iso is not None
        assert iso.vertex_map == {"x": "w", "y": "u"}
        c = ColoredGraph.build({"u": 1, "w": 1}, [("uw", "u", "w")])
        assert ComplexOps.colored_isomorphism(a, c) is None


class TestDistances:
    def test_geodesic(self):
        scale = GeodesicScale(kappa=Fraction(1, 2))
        assert ComplexOps.geodesic_distance(path_graph(4), scale, "p0", "p3") == Fraction(3, 2)

    def test_separated(self):
        g = ColoredGraph.build(["a", "b"])
        assert ComplexOps.geodesic_distance(g, GeodesicScale(kappa=1), "a", "b") is None

    def test_unknown_vertex(self):
        with pytest.raises(UnknownVertex):
            ComplexOps.geodesic_distance(path_graph(2), GeodesicScale(kappa=1), "p0", "zz")

    def test_kappa_must_be_positive(self):
        with pytest.raises(ValueError):
            GeodesicScale(kappa=0)

    def test_points_on_edges(self):
        g = path_graph(3)
        p = GraphPoint(kind="edge", cell="p0-p1", offset=Fraction(1, 4))
        q = GraphPoint(kind="edge", cell="p1-p2", offset=Fraction(1, 2))
        assert ComplexOps.point_hops(g, p, q) == Fraction(5, 4)
        assert ComplexOps.point_distance(g, GeodesicScale(kappa=2), p, q) == Fraction(5, 2)

    def test_edge_endpoints_normalize(self):
        g = path_graph(2)
        point = GraphPoint(kind="edge", cell="p0-p1", offset=Fraction(1))
        assert ComplexOps.normalize_point(g, point) == GraphPoint(kind="vertex", cell="p1")

    def test_diameter(self):
        assert ComplexOps.diameter(path_graph(5)) == 4
        assert ComplexOps.diameter(ColoredGraph.build(["a", "b"])) == 0
