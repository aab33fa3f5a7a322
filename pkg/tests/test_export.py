"""DOT and JSON graph export, level tables and certificate reports."""

import json

import pandas as pd
import pytest

from markovkit.errors import UnsupportedFormat
from markovkit.services.expansion import ExpansionEngine
from markovkit.services.export import EXPORT_FORMATS, Exporter
from markovkit.services.theorems import TheoremChecker


def test_dot_export(diamond, diamond_levels):
    text = Exporter.export_graph(diamond_levels[1].graph, "dot", name="diamond", level=2)
    assert text.startswith('graph "diamond" {')
    assert 'label="diamond level 2"' in text
    assert text.count(" -- ") == 4
    assert text.rstrip().endswith("}")


def test_dot_uses_palette_styles(solenoid, solenoid_levels):
    graph = solenoid_levels[2].graph
    text = Exporter.export_graph(graph, "dot", name="solenoid", palette=solenoid.palette)
    assert text.count("style=dotted") == 1
    assert text.count("style=solid") == len(graph.edges) - 1


def test_json_export(diamond_levels):
    graph = diamond_levels[2].graph
    data = json.loads(Exporter.export_graph(graph, "json", name="diamond", level=3))
    assert data["level"] == 3
    assert [n["id"] for n in data["nodes"]] == list(graph.vertex_ids)
    assert len(data["edges"]) == 16
    assert {e["style"] for e in data["edges"]} == {"solid"}


@pytest.mark.parametrize("fmt", ["svg", "DOT", ""])
def test_unsupported_format(diamond, fmt):
    with pytest.raises(UnsupportedFormat):
        Exporter.export_graph(diamond.start, fmt)
    assert fmt not in EXPORT_FORMATS


def test_level_table(diamond_levels):
    table = Exporter.level_table(diamond_levels)
    assert isinstance(table, pd.DataFrame)
    assert list(table["vertices"]) == [2, 4, 12, 44, 172]
    assert list(table["euler_characteristic"]) == [1, 0, -4, -20, -84]
    assert list(table["components"]) == [1] * 5
    assert table["bonding_class"].iloc[0] is None
    assert set(table["bonding_class"].iloc[1:]) == {"quasiSimplicial"}


def test_level_table_mixed_bonding(mixed_diamond):
    table = Exporter.level_table(ExpansionEngine(mixed_diamond).expand(3))
    assert list(table["bonding_class"].iloc[1:]) == ["mixed", "mixed"]
    assert list(table["edges"]) == [2, 5, 17]


def test_levels_csv(solenoid_levels):
    lines = Exporter.levels_csv(solenoid_levels[:2]).splitlines()
    assert lines[0] == "Level,Vertices,Edges,Components,V - E,Bonding map"
    assert lines[1] == "1,3,3,1,0,"
    assert lines[2] == "2,6,6,1,0,simplicial"


def test_certificate_pdf(one_eight):
    certificate = TheoremChecker.certify(one_eight, 3)
    pdf = Exporter.render_certificate_pdf(certificate)
    assert pdf.startswith(b"%PDF")
    assert len(pdf) > 1000


def test_inconclusive_certificate_pdf(builtins):
    certificate = TheoremChecker.certify(builtins["cantor"], 2, with_metrics=False)
    assert Exporter.render_certificate_pdf(certificate).startswith(b"%PDF")
