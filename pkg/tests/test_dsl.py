"""Diagram document parsing, canonical serialization and artifact loading."""

import json

import pytest

from markovkit.errors import DiagramSyntaxError, DuplicateName, UnknownReference
from markovkit.services.dsl import DiagramCodec
from markovkit.services.theorems import TheoremChecker


def document(diagram) -> dict:
    return json.loads(DiagramCodec.serialize(diagram))


@pytest.mark.parametrize(
    "name", ["cantor", "diamond", "join", "one_eight", "solenoid", "suspension"]
)
def test_serialization_is_a_fixpoint(builtins, name):
    text = DiagramCodec.serialize(builtins[name])
    parsed = DiagramCodec.parse(text)
    assert DiagramCodec.serialize(parsed) == text
    assert parsed.name == name


def test_key_order(diamond):
    keys = ["name", "palette", "start", "productions", "gluings", "notes"]
    assert list(document(diamond)) == keys


def test_parse_sorts_names(diamond):
    data = document(diamond)
    data["productions"].reverse()
    parsed = DiagramCodec.parse(json.dumps(data))
    assert [p.name for p in parsed.productions] == sorted(p.name for p in diamond.productions)
    assert DiagramCodec.content_hash(parsed) == DiagramCodec.content_hash(diamond)


@pytest.mark.parametrize("text", ["", "   \n"])
def test_empty_document(text):
    with pytest.raises(DiagramSyntaxError) as excinfo:
        DiagramCodec.parse(text)
    assert excinfo.value.line == 1
    assert "missing start" in str(excinfo.value)


def test_bad_json_reports_position():
    with pytest.raises(DiagramSyntaxError) as excinfo:
        DiagramCodec.parse('{\n  "name": "x",\n  "start": }')
    assert excinfo.value.line == 3
    assert excinfo.value.column is not None


def test_not_an_object():
    with pytest.raises(DiagramSyntaxError):
        DiagramCodec.parse("[1, 2]")


def test_missing_field(diamond):
    data = document(diamond)
    del data["start"]
    with pytest.raises(DiagramSyntaxError) as excinfo:
        DiagramCodec.parse(json.dumps(data))
    assert "missing field 'start'" in str(excinfo.value)


def test_unknown_field(diamond):
    data = document(diamond)
    data["extra"] = 1
    with pytest.raises(DiagramSyntaxError) as excinfo:
        DiagramCodec.parse(json.dumps(data))
    assert excinfo.value.location == "extra"


def test_duplicate_production(diamond):
    data = document(diamond)
    data["productions"].append(data["productions"][0])
    with pytest.raises(DuplicateName) as excinfo:
        DiagramCodec.parse(json.dumps(data))
    assert excinfo.value.kind == "production"


def test_unknown_production_reference(diamond):
    data = document(diamond)
    data["gluings"][0]["dst"] = "nowhere"
    with pytest.raises(UnknownReference) as excinfo:
        DiagramCodec.parse(json.dumps(data))
    assert excinfo.value.name == "nowhere"


def test_content_hash(builtins):
    hashes = {DiagramCodec.content_hash(d) for d in builtins.values()}
    assert len(hashes) == len(builtins)
    assert all(h.startswith("sha256:") and len(h) == len("sha256:") + 64 for h in hashes)


def test_certificate_loads(diamond):
    certificate = TheoremChecker.certify(diamond, 2)
    text = DiagramCodec.serialize_certificate(certificate)
    loaded = DiagramCodec.load_certificate(text)
    assert loaded.model_dump_json() == certificate.model_dump_json()
    assert loaded.diagram_hash == DiagramCodec.content_hash(diamond)


def test_certificate_schema_errors():
    with pytest.raises(DiagramSyntaxError):
        DiagramCodec.load_certificate('{"label": "MengerCurve"}')


class TestLevelDumps:
    def test_round_trip(self, diamond, diamond_levels):
        dump = DiagramCodec.load_levels(DiagramCodec.serialize_levels(diamond, diamond_levels[:2]))
        assert dump.diagram_name == "diamond"
        assert [s.graph.counts for s in dump.levels] == [(2, 1), (4, 4)]
        assert dump.levels[0].decomposition is None

    def test_unknown_schema(self, diamond, diamond_levels):
        data = json.loads(DiagramCodec.serialize_levels(diamond, diamond_levels[:1]))
        data["schema_version"] = "markovkit.levels/99"
        with pytest.raises(DiagramSyntaxError) as excinfo:
            DiagramCodec.load_levels(json.dumps(data))
        assert excinfo.value.location == "schema_version"

    def test_truncated_text(self, diamond, diamond_levels):
        text = DiagramCodec.serialize_levels(diamond, diamond_levels[:1])
        with pytest.raises(DiagramSyntaxError):
            DiagramCodec.load_levels(text[: len(text) // 2])
