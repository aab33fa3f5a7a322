"""Plain graph export form."""

from typing import Optional

from pydantic import BaseModel, Field


class ExportNode(BaseModel):
    id: str
    color: int


class ExportEdge(BaseModel):
    id: str
    source: str
    target: str
    color: int
    style: str = "solid"


class GraphExport(BaseModel):
    """A graph as node and edge lists, the ``json`` export format."""

    name: str
    level: Optional[int] = Field(default=None, description="Level index when exporting a level")
    nodes: list[ExportNode] = Field(default_factory=list)
    edges: list[ExportEdge] = Field(default_factory=list)
