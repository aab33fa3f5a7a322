"""The built-in diagram library."""

import logging
from typing import Callable

from markovkit.errors import UnknownReference
from markovkit.models.complex import ColoredGraph, SubdivisionPoint
from markovkit.models.diagram import Gluing, MarkovDiagram, PaletteEntry, Production

logger = logging.getLogger(__name__)


def _v(cell: str) -> SubdivisionPoint:
    return SubdivisionPoint.vertex(cell)


def _bary(cell: str) -> SubdivisionPoint:
    return SubdivisionPoint.barycenter(cell)


def _vertex_bottom(color: int = 0) -> ColoredGraph:
    return ColoredGraph.build({"x": color})


def _edge_bottom(tail_color: int = 0, head_color: int = 0, color: int = 0) -> ColoredGraph:
    return ColoredGraph.build({"l": tail_color, "r": head_color}, [("e", "l", "r", color)])


def _point_production(name: str = "point", color: int = 0) -> Production:
    return Production(
        name=name,
        top=ColoredGraph.build({"p": color}),
        bottom=_vertex_bottom(color),
        map={"p": _v("x")},
    )


def _doubling_production(name: str, color: int = 0) -> Production:
    return Production(
        name=name,
        top=ColoredGraph.build({"a": color, "b": color}),
        bottom=_vertex_bottom(color),
        map={"a": _v("x"), "b": _v("x")},
    )


def _end_gluings(src: str, dst: str, tail: dict[str, str], head: dict[str, str]) -> list[Gluing]:
    """Gluings of one vertex production into both ends of an edge production."""
    return [
        Gluing(name=f"{src}>{dst}@tail", src=src, dst=dst, top_map=tail, bottom_map={"x": "l"}),
        Gluing(name=f"{src}>{dst}@head", src=src, dst=dst, top_map=head, bottom_map={"x": "r"}),
    ]


def cantor() -> MarkovDiagram:
    """Every vertex doubles; level n is a discrete set of 2^(n-1) points."""
    return MarkovDiagram(
        name="cantor",
        palette=(PaletteEntry(id=0, name="point"),),
        start=ColoredGraph.build({"v1": 0}),
        productions=(_doubling_production("double"),),
    )


def suspension() -> MarkovDiagram:
    hollow = 1
    pole_edge = Production(
        name="pole_edge",
        top=ColoredGraph.build(
            {"P": 0, "H0": hollow, "H1": hollow}, [("P-H0", "P", "H0"), ("P-H1", "P", "H1")]
        ),
        bottom=_edge_bottom(0, hollow),
        map={"P": _v("l"), "H0": _v("r"), "H1": _v("r")},
    )
    return MarkovDiagram(
        name="suspension",
        palette=(PaletteEntry(id=0, name="pole"), PaletteEntry(id=1, name="hollow")),
        start=ColoredGraph.build(
            {"n": 0, "m": hollow, "s": 0}, [("n-m", "n", "m"), ("s-m", "s", "m")]
        ),
        productions=(
            pole_edge,
            _point_production("pole"),
            _doubling_production("hollow", hollow),
        ),
        gluings=(
            Gluing(
                name="pole>pole_edge",
                src="pole",
                dst="pole_edge",
                top_map={"p": "P"},
                bottom_map={"x": "l"},
            ),
            Gluing(
                name="hollow>pole_edge",
                src="hollow",
                dst="pole_edge",
                top_map={"a": "H0", "b": "H1"},
                bottom_map={"x": "r"},
            ),
        ),
        notes=(
            "The drawn two-edge bottom is split into its halves, each covered by pole_edge.",
            "The hollow vertex production doubles the middle vertex so that every "
            "signature has a production; its two copies are the hollow ends of pole_edge.",
        ),
    )


def diamond() -> MarkovDiagram:
    square = Production(
        name="diamond",
        top=ColoredGraph.build(
            {"L": 0, "M1": 0, "M2": 0, "R": 0},
            [("L-M1", "L", "M1"), ("M1-R", "M1", "R"), ("L-M2", "L", "M2"), ("M2-R", "M2", "R")],
        ),
        bottom=_edge_bottom(),
        map={"L": _v("l"), "M1": _bary("e"), "M2": _bary("e"), "R": _v("r")},
    )
    return MarkovDiagram(
        name="diamond",
        palette=(PaletteEntry(id=0, name="plain"),),
        start=ColoredGraph.build(["v1", "v2"], [("v1-v2", "v1", "v2")]),
        productions=(square, _point_production()),
        gluings=tuple(_end_gluings("point", "diamond", {"p": "L"}, {"p": "R"})),
    )


def join() -> MarkovDiagram:
    """Join of two Cantor sets: both ends double, the edge becomes a complete bipartite graph."""
    bipartite = Production(
        name="join",
        top=ColoredGraph.build(
            {"L0": 0, "L1": 0, "R0": 0, "R1": 0},
            [(f"L{i}-R{j}", f"L{i}", f"R{j}") for i in range(2) for j in range(2)],
        ),
        bottom=_edge_bottom(),
        map={"L0": _v("l"), "L1": _v("l"), "R0": _v("r"), "R1": _v("r")},
    )
    return MarkovDiagram(
        name="join",
        palette=(PaletteEntry(id=0, name="plain"),),
        start=ColoredGraph.build(["u", "w"], [("u-w", "u", "w")]),
        productions=(bipartite, _doubling_production("double")),
        gluings=tuple(
            _end_gluings("double", "join", {"a": "L0", "b": "L1"}, {"a": "R0", "b": "R1"})
        ),
    )


def solenoid() -> MarkovDiagram:
    """Degree-two covering of a triangle; the single dotted edge carries the twist."""
    solid, dotted = 0, 1
    vertices = {"pl": 0, "ql": 0, "pr": 0, "qr": 0}
    straight = Production(
        name="solid",
        top=ColoredGraph.build(
            vertices, [("pl-pr", "pl", "pr", solid), ("ql-qr", "ql", "qr", solid)]
        ),
        bottom=_edge_bottom(color=solid),
        map={"pl": _v("l"), "ql": _v("l"), "pr": _v("r"), "qr": _v("r")},
    )
    twisted = Production(
        name="dotted",
        top=ColoredGraph.build(
            vertices, [("pl-qr", "pl", "qr", dotted), ("ql-pr", "ql", "pr", solid)]
        ),
        bottom=_edge_bottom(color=dotted),
        map={"pl": _v("l"), "ql": _v("l"), "pr": _v("r"), "qr": _v("r")},
    )
    split = Production(
        name="split",
        top=ColoredGraph.build({"p": 0, "q": 0}),
        bottom=_vertex_bottom(),
        map={"p": _v("x"), "q": _v("x")},
    )
    gluings = []
    for edge_production in ("solid", "dotted"):
        gluings += _end_gluings(
            "split", edge_production, {"p": "pl", "q": "ql"}, {"p": "pr", "q": "qr"}
        )
    return MarkovDiagram(
        name="solenoid",
        palette=(
            PaletteEntry(id=solid, name="solid", style="solid"),
            PaletteEntry(id=dotted, name="dotted", style="dotted"),
        ),
        start=ColoredGraph.build(
            ["v1", "v2", "v3"],
            [
                ("v1-v2", "v1", "v2", solid),
                ("v2-v3", "v2", "v3", solid),
                ("v1-v3", "v1", "v3", dotted),
            ],
        ),
        productions=(straight, twisted, split),
        gluings=tuple(gluings),
        notes=(
            "The two-point vertex production and its endpoint gluings are usually left out "
            "of drawn diagrams; they are explicit here.",
        ),
    )


def one_eight() -> MarkovDiagram:
    """
    An edge becomes an 8-shaped graph (hexagon A-B-C-D-E-F plus the chord F-C).

    The tail fiber is the edge D-E, the head fiber A-B, and C, F lie over the
    barycenter. Every vertex becomes an edge, glued onto D-E or A-B.
    """
    eight = Production(
        name="P8",
        top=ColoredGraph.build(
            ["A", "B", "C", "D", "E", "F"],
            [
                ("A-B", "A", "B"),
                ("B-C", "B", "C"),
                ("C-D", "C", "D"),
                ("D-E", "D", "E"),
                ("E-F", "E", "F"),
                ("A-F", "A", "F"),
                ("C-F", "C", "F"),
            ],
        ),
        bottom=_edge_bottom(),
        map={
            "A": _v("r"),
            "B": _v("r"),
            "C": _bary("e"),
            "D": _v("l"),
            "E": _v("l"),
            "F": _bary("e"),
        },
    )
    fiber = Production(
        name="P1",
        top=ColoredGraph.build(["a", "b"], [("a-b", "a", "b")]),
        bottom=_vertex_bottom(),
        map={"a": _v("x"), "b": _v("x")},
    )
    return MarkovDiagram(
        name="one_eight",
        palette=(PaletteEntry(id=0, name="plain"),),
        start=ColoredGraph.build(["v1", "v2"], [("v1-v2", "v1", "v2")]),
        productions=(eight, fiber),
        gluings=(
            Gluing(
                name="Gl", src="P1", dst="P8", top_map={"a": "D", "b": "E"}, bottom_map={"x": "l"}
            ),
            Gluing(
                name="Gr", src="P1", dst="P8", top_map={"a": "A", "b": "B"}, bottom_map={"x": "r"}
            ),
        ),
    )


BUILTINS: dict[str, Callable[[], MarkovDiagram]] = {
    "cantor": cantor,
    "diamond": diamond,
    "join": join,
    "one_eight": one_eight,
    "solenoid": solenoid,
    "suspension": suspension,
}


class BuiltinLibrary:
    """Named access to the built-in diagrams."""

    @staticmethod
    def names() -> list[str]:
        return sorted(BUILTINS)

    @staticmethod
    def get(name: str) -> MarkovDiagram:
        factory = BUILTINS.get(name)
        if factory is None:
            raise UnknownReference(name, "builtin library")
        return factory()
