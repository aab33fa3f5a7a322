"""Diagram engine and property checker for Markov compacta."""

__version__ = "0.1.0"
