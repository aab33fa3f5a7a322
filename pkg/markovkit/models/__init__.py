"""Data models for the application."""

from .complex import ColoredGraph, QuasiSimplicialMap, SubdivisionPoint, Violation
from .diagram import DiagramReport, Gluing, MarkovDiagram, Production
from .expansion import LevelState
from .metrics import MetricSchedule, Thread
from .verdicts import Certificate, SectionPair

__all__ = [
    "Certificate",
    "ColoredGraph",
    "DiagramReport",
    "Gluing",
    "LevelState",
    "MarkovDiagram",
    "MetricSchedule",
    "Production",
    "QuasiSimplicialMap",
    "SectionPair",
    "SubdivisionPoint",
    "Thread",
    "Violation",
]
