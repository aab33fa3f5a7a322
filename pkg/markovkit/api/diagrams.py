"""Builtin listing, diagram validation, upload and expansion endpoints."""

import logging
from typing import Optional

from fastapi import APIRouter, File, HTTPException, Query, Request, UploadFile
from fastapi.responses import PlainTextResponse

from markovkit.api.common import builtin_diagram, get_cache, http_error, load_diagram
from markovkit.config import DEFAULT_DEPTH, DIAGRAM_SUFFIX
from markovkit.errors import MarkovError
from markovkit.models.diagram import DiagramReport
from markovkit.services.builtins import BuiltinLibrary
from markovkit.services.diagram_checks import DiagramValidator
from markovkit.services.dsl import DiagramCodec
from markovkit.services.expansion import DecompositionChecker

logger = logging.getLogger(__name__)
router = APIRouter(tags=["diagrams"])


def _report_body(report: DiagramReport) -> dict:
    return {
        "report": report.model_dump(mode="json"),
        "valid": report.valid,
        "elementary": report.elementary,
        "complete": report.complete,
        "failures": [v.model_dump() for v in report.failures()],
    }


@router.get("/builtins")
async def list_builtins():
    """Names of the builtin diagrams."""
    return {"builtins": BuiltinLibrary.names()}


@router.get("/builtins/{name}", response_class=PlainTextResponse)
async def get_builtin(name: str):
    """Canonical document text of a builtin diagram."""
    return DiagramCodec.serialize(builtin_diagram(name))


@router.post("/diagrams/validate")
async def validate_diagram(request: Request, builtin: Optional[str] = Query(None)):
    """
    Validate a diagram sent as the request body (or a builtin).

    Returns:
        DiagramReport with the derived flags and the flat failure list
    """
    diagram = await load_diagram(request, builtin)
    report = DiagramValidator.validate_diagram(diagram)
    return _report_body(report)


@router.post("/diagrams/upload")
async def upload_diagram(file: UploadFile = File(...)):
    """Validate an uploaded diagram file."""
    if file.filename and not file.filename.endswith(DIAGRAM_SUFFIX):
        raise HTTPException(status_code=400, detail=f"Expected a {DIAGRAM_SUFFIX} file")
    text = (await file.read()).decode("utf-8", errors="replace")
    try:
        diagram = DiagramCodec.parse(text)
    except MarkovError as e:
        raise http_error(e)
    report = DiagramValidator.validate_diagram(diagram)
    logger.info("Uploaded diagram %s (valid=%s)", diagram.name, report.valid)
    return {
        "name": diagram.name,
        "hash": DiagramCodec.content_hash(diagram),
        **_report_body(report),
    }


@router.post("/diagrams/expand")
async def expand_diagram(
    request: Request,
    builtin: Optional[str] = Query(None),
    depth: int = Query(DEFAULT_DEPTH, ge=1, le=12),
):
    """
    Expand a diagram and re-verify every level's decomposition.

    Args:
        depth: Number of levels

    Returns:
        Per-level counts and decomposition verdicts
    """
    diagram = await load_diagram(request, builtin)
    try:
        levels = get_cache(request).levels(diagram, depth)
        verdicts = DecompositionChecker(diagram).verify_levels(levels)
    except MarkovError as e:
        raise http_error(e)
    except Exception as e:
        logger.error(f"Unexpected error expanding {diagram.name}: {e}")
        raise HTTPException(status_code=500, detail="Failed to expand diagram")

    return {
        "name": diagram.name,
        "levels": [
            {"level": s.index, "vertices": len(s.graph.vertices), "edges": len(s.graph.edges)}
            for s in levels
        ],
        "verification": [v.model_dump(mode="json") for v in verdicts],
        "ok": all(v.ok for v in verdicts),
    }
