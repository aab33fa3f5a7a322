"""Helpers shared by the routers."""

import logging
from typing import Optional

from fastapi import HTTPException, Request

from markovkit.errors import (
    ConstructionFailed,
    DiagramInvalid,
    MarkovError,
    PreconditionFailed,
    UnknownReference,
)
from markovkit.models.diagram import MarkovDiagram
from markovkit.services.builtins import BuiltinLibrary
from markovkit.services.dsl import DiagramCodec
from markovkit.services.run_cache import ExpansionCache

logger = logging.getLogger(__name__)


def get_cache(request: Request) -> ExpansionCache:
    return request.app.state.expansion_cache


def builtin_diagram(name: str) -> MarkovDiagram:
    """Builtin diagram by name, 404 when unknown."""
    try:
        return BuiltinLibrary.get(name)
    except UnknownReference:
        raise HTTPException(status_code=404, detail=f"Unknown builtin diagram '{name}'")


async def load_diagram(request: Request, builtin: Optional[str]) -> MarkovDiagram:
    """Diagram named by ``?builtin=`` or else parsed from the request body."""
    if builtin:
        return builtin_diagram(builtin)
    body = (await request.body()).decode("utf-8", errors="replace")
    if not body.strip():
        raise HTTPException(status_code=400, detail="Send diagram text or use ?builtin=")
    try:
        return DiagramCodec.parse(body)
    except MarkovError as e:
        raise HTTPException(status_code=400, detail=str(e))


def http_error(e: MarkovError) -> HTTPException:
    """Status code for a library error."""
    if isinstance(e, (ConstructionFailed, PreconditionFailed)):
        return HTTPException(status_code=422, detail=str(e))
    if isinstance(e, DiagramInvalid):
        failures = [f"{v.code}: {v.message}" for v in e.report.failures()]
        return HTTPException(status_code=400, detail={"error": str(e), "failures": failures})
    return HTTPException(status_code=400, detail=str(e))
