"""Services for the application."""

from .builtins import BuiltinLibrary
from .complex_ops import ComplexOps
from .diagram_checks import DiagramValidator
from .dsl import DiagramCodec
from .expansion import DecompositionChecker, ExpansionEngine
from .export import Exporter
from .graph_algorithms import GraphAlgorithms
from .metrics import LimitMetrics
from .run_cache import ExpansionCache
from .theorems import TheoremChecker

__all__ = [
    "BuiltinLibrary",
    "ComplexOps",
    "DecompositionChecker",
    "DiagramCodec",
    "DiagramValidator",
    "ExpansionCache",
    "ExpansionEngine",
    "Exporter",
    "GraphAlgorithms",
    "LimitMetrics",
    "TheoremChecker",
]
