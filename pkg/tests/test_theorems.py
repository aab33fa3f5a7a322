"""Connectedness and disjoint-arcs hypotheses, section witnesses and certificates."""

import pytest

from markovkit.errors import (
    ConstructionFailed,
    DiagramInvalid,
    IndexOutOfRange,
    PreconditionFailed,
)
from markovkit.models.complex import ColoredGraph
from markovkit.models.verdicts import SectionPair
from markovkit.services.dsl import DiagramCodec
from markovkit.services.expansion import ExpansionEngine
from markovkit.services.graph_algorithms import GraphAlgorithms
from markovkit.services.theorems import TheoremChecker


def failure_codes(verdict):
    return sorted({f.code for f in verdict.failures})


def counts_of(levels):
    return [state.graph.counts for state in levels]


class TestConnectedness:
    @pytest.mark.parametrize(
        "name, expected",
        [
            ("one_eight", []),
            ("diamond", []),
            ("cantor", ["TopDisconnected"]),
            ("suspension", ["NotQuasiSimplicial"]),
            ("join", ["NotQuasiSimplicial"]),
            ("solenoid", ["NotQuasiSimplicial", "TopDisconnected"]),
        ],
    )
    def test_hypotheses(self, builtins, name, expected):
        verdict = TheoremChecker.check_connectedness(builtins[name])
        assert failure_codes(verdict) == expected
        assert verdict.hypotheses_hold == (not expected)

    def test_suspension_flags_the_edge_production(self, builtins):
        verdict = TheoremChecker.check_connectedness(builtins["suspension"])
        assert [f.witness for f in verdict.failures] == [["pole_edge"]]

    def test_cantor_flags_the_vertex_production(self, builtins):
        verdict = TheoremChecker.check_connectedness(builtins["cantor"])
        assert [f.witness for f in verdict.failures] == [["double"]]
        assert verdict.conclusion == "noConclusion"

    def test_glued_star_joins_fiber_copies(self, builtins):
        join = builtins["join"]
        star = TheoremChecker.glued_star(join, join.production("double"))
        # own top (2) plus one K22 per gluing (2 x 4)
        assert star.number_of_nodes() == 10

    def test_only_k_zero(self, one_eight):
        with pytest.raises(PreconditionFailed):
            TheoremChecker.check_connectedness(one_eight, k=1)

    def test_start_disconnected(self, one_eight, variant):
        start = ColoredGraph.build(["v1", "v2", "v3"], [("v1-v2", "v1", "v2")])
        verdict = TheoremChecker.check_connectedness(variant(one_eight, start=start))
        assert failure_codes(verdict) == ["StartDisconnected"]
        assert verdict.failures[0].witness == ["v1", "v3"]

    def test_invalid_diagram(self, one_eight, variant):
        start = ColoredGraph.build(["v1"], [("loop", "v1", "v1")])
        with pytest.raises(DiagramInvalid):
            TheoremChecker.check_connectedness(variant(one_eight, start=start))

    @pytest.mark.parametrize(
        "name, judged",
        [
            ("cantor", "literal"),
            ("diamond", "gluedStar"),
            ("join", "gluedStar"),
            ("one_eight", "gluedStar"),
            ("suspension", "gluedStar"),
        ],
    )
    def test_how_vertex_tops_are_judged(self, builtins, name, judged):
        assert TheoremChecker.check_connectedness(builtins[name]).vertex_tops == judged

    def test_unused_edge_production_does_not_connect_fibers(self, fan):
        diagram = fan(ColoredGraph.build(["v1"]))
        verdict = TheoremChecker.check_connectedness(diagram)
        assert verdict.vertex_tops == "literal"
        assert failure_codes(verdict) == ["TopDisconnected"]
        assert [f.witness for f in verdict.failures] == [["double"]]
        levels = ExpansionEngine(diagram).expand(4)
        components = [len(GraphAlgorithms.connected_components(s.graph)) for s in levels]
        assert components == [1, 2, 4, 8]

    def test_fibers_joined_through_edge_tops(self, fan):
        diagram = fan(ColoredGraph.build(["v1", "v2"], [("v1-v2", "v1", "v2")]))
        verdict = TheoremChecker.check_connectedness(diagram)
        assert verdict.vertex_tops == "gluedStar"
        assert verdict.hypotheses_hold
        levels = ExpansionEngine(diagram).expand(4)
        assert counts_of(levels)[:2] == [(2, 1), (5, 4)]
        assert all(GraphAlgorithms.is_connected(s.graph) for s in levels)

    def test_passing_diagrams_have_connected_levels(self, builtins, builtin_levels):
        for name, levels in builtin_levels.items():
            if TheoremChecker.check_connectedness(builtins[name]).hypotheses_hold:
                assert all(GraphAlgorithms.is_connected(s.graph) for s in levels), name


class TestDisjointArcs:
    def test_one_eight_holds(self, one_eight):
        verdict = TheoremChecker.check_dap(one_eight)
        assert verdict.conclusion == "DAP"
        assert verdict.elementary
        assert verdict.vertex_productions_canonical
        assert verdict.edge_tops_connected
        assert verdict.edge_tops_biconnected
        assert verdict.failures == []

    @pytest.mark.parametrize("name", ["cantor", "diamond", "suspension", "solenoid"])
    def test_vertex_production_shape(self, builtins, name):
        verdict = TheoremChecker.check_dap(builtins[name])
        assert verdict.conclusion == "noConclusion"
        assert "VertexProductionShape" in failure_codes(verdict)

    def test_join_vertex_shape_only(self, builtins):
        verdict = TheoremChecker.check_dap(builtins["join"])
        assert failure_codes(verdict) == ["VertexProductionShape"]

    def test_solenoid_edge_tops(self, solenoid):
        verdict = TheoremChecker.check_dap(solenoid)
        assert not verdict.edge_tops_connected
        assert not verdict.edge_tops_biconnected

    def test_canonical_vertex_production(self, builtins):
        assert TheoremChecker.is_canonical_vertex_production(builtins["one_eight"].production("P1"))
        assert not TheoremChecker.is_canonical_vertex_production(
            builtins["diamond"].production("point")
        )
        assert not TheoremChecker.is_canonical_vertex_production(
            builtins["join"].production("double")
        )

    def test_pairing_table_only_crossed(self, one_eight):
        (row,) = TheoremChecker.pairing_table(one_eight)
        assert (row.production, row.tail_gluing, row.head_gluing) == ("P8", "Gl", "Gr")
        assert not row.straight
        assert row.crossed
        assert row.crossed_paths == (["D", "C", "B"], ["E", "F", "A"])


class TestSections:
    @pytest.mark.parametrize("level", [1, 2, 3, 4, 5])
    def test_one_eight_sections_verify(self, one_eight, one_eight_levels, level):
        pair = TheoremChecker.build_sections(one_eight, one_eight_levels, level)
        check = TheoremChecker.verify_sections(one_eight_levels, pair)
        assert check.ok, check.violations[:3]
        assert set(pair.pairings.values()) == {"crossed"}
        base = one_eight_levels[level - 1].graph
        assert set(pair.f_vertices) == set(base.vertex_ids)
        assert set(pair.f_paths) == set(base.edge_ids)

    def test_sections_at_level_six(self, one_eight, one_eight_deep_levels):
        levels = one_eight_deep_levels
        pair = TheoremChecker.build_sections(one_eight, levels, 6)
        assert TheoremChecker.verify_sections(levels, pair).ok

    def test_fiber_letters_alternate(self, one_eight, one_eight_levels):
        pair = TheoremChecker.build_sections(one_eight, one_eight_levels, 1)
        assert pair.fiber_choice["v1"] != pair.fiber_choice["v2"]

    def test_images_are_disjoint(self, one_eight, one_eight_levels):
        pair = TheoremChecker.build_sections(one_eight, one_eight_levels, 2)
        f_image = set(pair.f_vertices.values()).union(*map(set, pair.f_paths.values()))
        g_image = set(pair.g_vertices.values()).union(*map(set, pair.g_paths.values()))
        assert not f_image & g_image

    def test_verification_catches_overlap(self, one_eight, one_eight_levels):
        pair = TheoremChecker.build_sections(one_eight, one_eight_levels, 1)
        clash = pair.model_copy(update={"g_vertices": dict(pair.f_vertices)})
        check = TheoremChecker.verify_sections(one_eight_levels, clash)
        assert not check.ok
        assert "NotDisjoint" in {v.code for v in check.violations}

    def test_verification_catches_non_adjacent_path(self, one_eight, one_eight_levels):
        pair = TheoremChecker.build_sections(one_eight, one_eight_levels, 1)
        path = pair.f_paths["v1-v2"]
        broken = SectionPair.model_validate(
            {**pair.model_dump(), "f_paths": {"v1-v2": [path[0], path[-1]]}}
        )
        check = TheoremChecker.verify_sections(one_eight_levels, broken)
        codes = {v.code for v in check.violations}
        assert "NotAdjacent" in codes

    def test_diamond_precondition(self, diamond, diamond_levels):
        with pytest.raises(PreconditionFailed) as excinfo:
            TheoremChecker.build_sections(diamond, diamond_levels, 1)
        assert "VertexProductionShape" in str(excinfo.value)

    def test_level_out_of_range(self, one_eight, one_eight_levels):
        with pytest.raises(IndexOutOfRange):
            TheoremChecker.build_sections(one_eight, one_eight_levels[:2], 2)

    def test_odd_cycle_has_no_consistent_letters(self, one_eight, variant):
        """Crossed-only pairings force letters to alternate, which a triangle cannot do."""
        triangle = ColoredGraph.build(
            ["v1", "v2", "v3"],
            [("v1-v2", "v1", "v2"), ("v2-v3", "v2", "v3"), ("v1-v3", "v1", "v3")],
        )
        diagram = variant(one_eight, start=triangle)
        levels = ExpansionEngine(diagram).expand(2)
        with pytest.raises(ConstructionFailed) as excinfo:
            TheoremChecker.build_sections(diagram, levels, 1)
        assert excinfo.value.details["level"] == 1
        assert len(excinfo.value.details["infeasible_edges"]) == 3


class TestTwoSat:
    def test_satisfiable(self):
        clauses = [(("x", True), ("y", True)), (("x", False), ("y", False))]
        solution = GraphAlgorithms.solve_two_sat(["x", "y"], clauses)
        assert solution is not None
        assert solution["x"] != solution["y"]

    def test_unsatisfiable(self):
        clauses = [
            (("x", True), ("x", True)),
            (("x", False), ("x", False)),
        ]
        assert GraphAlgorithms.solve_two_sat(["x"], clauses) is None


class TestCertificate:
    def test_one_eight_is_menger(self, one_eight):
        certificate = TheoremChecker.certify(one_eight, 4)
        assert certificate.label == "MengerCurve"
        assert certificate.properties == ["connected", "locallyConnected", "disjointArcs"]
        assert certificate.connectivity.hypotheses_hold
        assert [s.ok for s in certificate.dap.section_witness] == [True, True, True]
        assert certificate.dap.section_witness[0].pairings_used == {"crossed": 1}
        assert certificate.facts.level_counts == [(2, 1), (6, 7), (26, 41), (134, 231)]
        assert certificate.issued_at is None

    def test_diamond_lists_properties(self, diamond):
        certificate = TheoremChecker.certify(diamond, 3)
        assert certificate.label == "propertiesList"
        assert certificate.properties == ["connected", "locallyConnected"]
        assert [f.code for f in certificate.dap.failures] == ["VertexProductionShape"]

    @pytest.mark.parametrize("name", ["cantor", "suspension", "join", "solenoid"])
    def test_inconclusive(self, builtins, name):
        certificate = TheoremChecker.certify(builtins[name], 3, with_metrics=False)
        assert certificate.label == "inconclusive"
        assert certificate.properties == []
        assert certificate.metrics is None

    @pytest.mark.parametrize(
        "name", ["cantor", "diamond", "join", "one_eight", "solenoid", "suspension"]
    )
    def test_certificates_are_reproducible(self, builtins, name):
        first = DiagramCodec.serialize_certificate(TheoremChecker.certify(builtins[name], 3))
        second = DiagramCodec.serialize_certificate(TheoremChecker.certify(builtins[name], 3))
        assert first == second

    def test_timestamp_is_opt_in(self, one_eight):
        certificate = TheoremChecker.certify(one_eight, 2, timestamp=True)
        assert certificate.issued_at is not None

    def test_reuses_given_levels(self, one_eight, one_eight_levels):
        certificate = TheoremChecker.certify(
            one_eight, 3, with_metrics=False, levels=one_eight_levels
        )
        assert certificate.depth == 3

    def test_single_level(self, one_eight):
        certificate = TheoremChecker.certify(one_eight, 1)
        assert certificate.facts.level_counts == [(2, 1)]
        assert certificate.dap.section_witness == []
        assert certificate.metrics is None

    def test_depth_zero(self, one_eight):
        with pytest.raises(PreconditionFailed):
            TheoremChecker.certify(one_eight, 0)

