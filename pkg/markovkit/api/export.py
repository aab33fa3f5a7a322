"""Export endpoints for graphs, level tables and PDF certificates."""

import io
import logging

from fastapi import APIRouter, HTTPException, Query, Request
from fastapi.responses import PlainTextResponse, StreamingResponse

from markovkit.api.common import builtin_diagram, get_cache, http_error
from markovkit.config import DEFAULT_DEPTH
from markovkit.errors import MarkovError
from markovkit.services.export import Exporter
from markovkit.services.theorems import TheoremChecker

logger = logging.getLogger(__name__)
router = APIRouter(prefix="/export", tags=["export"])

MEDIA_TYPES = {"dot": "text/vnd.graphviz", "json": "application/json"}


@router.get("/graph")
async def export_graph(
    request: Request,
    builtin: str = Query(..., description="Builtin diagram name"),
    level: int = Query(1, ge=1, le=10),
    format: str = Query("dot", description="dot or json"),
):
    """
    Export one level of a builtin diagram.

    Returns:
        DOT or JSON text
    """
    diagram = builtin_diagram(builtin)
    if format not in MEDIA_TYPES:
        raise HTTPException(status_code=400, detail=f"UnsupportedFormat: {format!r}")
    try:
        state = get_cache(request).levels(diagram, level)[-1]
        text = Exporter.export_graph(
            state.graph, format, name=diagram.name, level=level, palette=diagram.palette
        )
    except MarkovError as e:
        raise http_error(e)

    return PlainTextResponse(text, media_type=MEDIA_TYPES[format])


@router.get("/levels.csv")
async def export_levels_csv(
    request: Request,
    builtin: str = Query(..., description="Builtin diagram name"),
    depth: int = Query(DEFAULT_DEPTH, ge=1, le=10),
):
    """Level table of a builtin diagram as CSV."""
    diagram = builtin_diagram(builtin)
    try:
        levels = get_cache(request).levels(diagram, depth)
    except MarkovError as e:
        raise http_error(e)

    filename = f"{diagram.name}_levels.csv"
    logger.info(f"Exported {len(levels)} levels of {diagram.name} to CSV")
    return StreamingResponse(
        iter([Exporter.levels_csv(levels)]),
        media_type="text/csv",
        headers={"Content-Disposition": f"attachment; filename={filename}"},
    )


@router.get("/certificate.pdf")
async def export_certificate_pdf(
    request: Request,
    builtin: str = Query(..., description="Builtin diagram name"),
    depth: int = Query(DEFAULT_DEPTH, ge=1, le=8),
):
    """Certificate of a builtin diagram as a PDF report."""
    diagram = builtin_diagram(builtin)
    try:
        cache = get_cache(request)
        levels = cache.levels(diagram, depth) if cache.entry(diagram).report.expandable else None
        certificate = TheoremChecker.certify(diagram, depth, levels=levels)
        pdf = Exporter.render_certificate_pdf(certificate)
    except MarkovError as e:
        raise http_error(e)
    except Exception as e:
        logger.error(f"Unexpected error rendering certificate for {diagram.name}: {e}")
        raise HTTPException(status_code=500, detail="Failed to render certificate")

    filename = f"{diagram.name}_certificate.pdf"
    return StreamingResponse(
        io.BytesIO(pdf),
        media_type="application/pdf",
        headers={"Content-Disposition": f"attachment; filename={filename}"},
    )
