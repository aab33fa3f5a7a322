"""Shared fixtures: builtin diagrams and their expanded prefixes."""

import pytest

from markovkit.models.complex import ColoredGraph
from markovkit.models.diagram import Gluing, MarkovDiagram, PaletteEntry, Production
from markovkit.services.builtins import BuiltinLibrary
from markovkit.services.expansion import ExpansionEngine

EXPANDABLE = ("cantor", "diamond", "join", "one_eight", "solenoid", "suspension")


@pytest.fixture(scope="session")
def builtins() -> dict[str, MarkovDiagram]:
    return {name: BuiltinLibrary.get(name) for name in BuiltinLibrary.names()}


@pytest.fixture(scope="session")
def one_eight(builtins):
    return builtins["one_eight"]


@pytest.fixture(scope="session")
def diamond(builtins):
    return builtins["diamond"]


@pytest.fixture(scope="session")
def solenoid(builtins):
    return builtins["solenoid"]


@pytest.fixture(scope="session")
def one_eight_deep_levels(one_eight):
    return ExpansionEngine(one_eight).expand(7)


@pytest.fixture(scope="session")
def one_eight_levels(one_eight_deep_levels):
    return one_eight_deep_levels[:6]


@pytest.fixture(scope="session")
def diamond_levels(diamond):
    return ExpansionEngine(diamond).expand(5)


@pytest.fixture(scope="session")
def solenoid_levels(solenoid):
    return ExpansionEngine(solenoid).expand(5)


@pytest.fixture(scope="session")
def builtin_levels(builtins):
    """Six levels of every builtin (solenoid and cantor grow slowly, one_eight fastest)."""
    return {name: ExpansionEngine(builtins[name]).expand(6) for name in EXPANDABLE}


def replace_fields(model, **changes):
    """Rebuild a frozen model with some fields replaced (derived caches are not carried over)."""
    values = {name: getattr(model, name) for name in type(model).model_fields}
    values.update(changes)
    return type(model)(**values)


@pytest.fixture
def variant():
    return replace_fields


def fan_diagram(start: ColoredGraph) -> MarkovDiagram:
    """
    Doubling vertex production whose two copies are joined through the middle
    of a fan-shaped edge top (quasi-simplicial, connected).
    """
    double = Production(
        name="double",
        top=ColoredGraph.build({"a": 0, "b": 0}),
        bottom=ColoredGraph.build({"x": 0}),
        map={"a": "v:x", "b": "v:x"},
    )
    fan = Production(
        name="fan",
        top=ColoredGraph.build(
            ["La", "Lb", "M", "Ra", "Rb"],
            [("La-M", "La", "M"), ("Lb-M", "Lb", "M"), ("M-Ra", "M", "Ra"), ("M-Rb", "M", "Rb")],
        ),
        bottom=ColoredGraph.build(["l", "r"], [("e", "l", "r")]),
        map={"La": "v:l", "Lb": "v:l", "M": "bary:e", "Ra": "v:r", "Rb": "v:r"},
    )
    gluings = (
        Gluing(
            name="double>fan@tail",
            src="double",
            dst="fan",
            top_map={"a": "La", "b": "Lb"},
            bottom_map={"x": "l"},
        ),
        Gluing(
            name="double>fan@head",
            src="double",
            dst="fan",
            top_map={"a": "Ra", "b": "Rb"},
            bottom_map={"x": "r"},
        ),
    )
    return MarkovDiagram(
        name="fan",
        palette=(PaletteEntry(id=0, name="plain"),),
        start=start,
        productions=(double, fan),
        gluings=gluings,
    )


@pytest.fixture(scope="session")
def fan():
    return fan_diagram


@pytest.fixture(scope="session")
def mixed_diamond(diamond):
    """Diamond plus a simplicial edge production for a second edge color."""
    plain = Production(
        name="plain",
        top=ColoredGraph.build(["a", "b"], [("a-b", "a", "b", 1)]),
        bottom=ColoredGraph.build(["l", "r"], [("e", "l", "r", 1)]),
        map={"a": "v:l", "b": "v:r"},
    )
    gluings = tuple(
        Gluing(
            name=f"point>plain@{role}",
            src="point",
            dst="plain",
            top_map={"p": end},
            bottom_map={"x": bottom},
        )
        for role, end, bottom in (("tail", "a", "l"), ("head", "b", "r"))
    )
    return MarkovDiagram(
        name="mixed",
        palette=(*diamond.palette, PaletteEntry(id=1, name="straight")),
        start=ColoredGraph.build(
            ["v1", "v2", "v3"], [("v1-v2", "v1", "v2", 0), ("v2-v3", "v2", "v3", 1)]
        ),
        productions=(*diamond.productions, plain),
        gluings=(*diamond.gluings, *gluings),
    )
