"""Certificate and section-witness endpoints."""

import logging
from typing import Optional

from fastapi import APIRouter, HTTPException, Query, Request

from markovkit.api.common import get_cache, http_error, load_diagram
from markovkit.config import DEFAULT_DEPTH, DEFAULT_SCHEDULE
from markovkit.errors import MarkovError
from markovkit.services.metrics import LimitMetrics
from markovkit.services.theorems import TheoremChecker

logger = logging.getLogger(__name__)
router = APIRouter(prefix="/checks", tags=["checks"])


@router.post("/certify")
async def certify(
    request: Request,
    builtin: Optional[str] = Query(None),
    depth: int = Query(DEFAULT_DEPTH, ge=1, le=10),
    schedule: str = Query(DEFAULT_SCHEDULE, description="halving, constant or list:k1,k2,..."),
    kappa: str = Query("1", description="kappa_1 as a rational"),
    metrics: bool = Query(True),
):
    """
    Certificate for a diagram.

    Returns:
        Certificate JSON
    """
    diagram = await load_diagram(request, builtin)
    try:
        parsed = LimitMetrics.parse_schedule(schedule, kappa)
        cache = get_cache(request)
        run = cache.entry(diagram)
        levels = cache.levels(diagram, depth) if run.report.expandable else None
        certificate = TheoremChecker.certify(
            diagram, depth, schedule=parsed, with_metrics=metrics, levels=levels
        )
    except MarkovError as e:
        raise http_error(e)
    except ValueError as e:
        raise HTTPException(status_code=400, detail=str(e))
    except Exception as e:
        logger.error(f"Unexpected error certifying {diagram.name}: {e}")
        raise HTTPException(status_code=500, detail="Failed to certify diagram")

    return certificate.model_dump(mode="json")


@router.post("/sections")
async def sections(
    request: Request,
    builtin: Optional[str] = Query(None),
    level: int = Query(1, ge=1, le=8),
):
    """
    Disjoint sections of the bonding map onto ``level`` and their verification.

    Expands to ``level + 1`` as needed.
    """
    diagram = await load_diagram(request, builtin)
    try:
        cache = get_cache(request)
        run = cache.entry(diagram)
        levels = cache.levels(diagram, level + 1)
        pair = TheoremChecker.build_sections(diagram, levels, level, run.report)
        check = TheoremChecker.verify_sections(levels, pair)
    except MarkovError as e:
        raise http_error(e)
    except Exception as e:
        logger.error(f"Unexpected error building sections for {diagram.name}: {e}")
        raise HTTPException(status_code=500, detail="Failed to build sections")

    return {"pair": pair.model_dump(mode="json"), "check": check.model_dump(mode="json")}
