"""API endpoints."""

from .checks import router as checks_router
from .diagrams import router as diagrams_router
from .export import router as export_router

__all__ = ["checks_router", "diagrams_router", "export_router"]
