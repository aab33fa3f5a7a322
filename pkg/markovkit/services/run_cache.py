"""In-memory cache of expanded diagrams for the HTTP surface."""

import asyncio
import logging
from dataclasses import dataclass, field
from datetime import datetime, timedelta
from typing import Optional

from markovkit.errors import PreconditionFailed
from markovkit.models.diagram import DiagramReport, MarkovDiagram
from markovkit.models.expansion import LevelState
from markovkit.services.diagram_checks import DiagramValidator
from markovkit.services.dsl import DiagramCodec
from markovkit.services.expansion import ExpansionEngine

logger = logging.getLogger(__name__)


@dataclass
class CachedRun:
    diagram: MarkovDiagram
    report: DiagramReport
    levels: list[LevelState] = field(default_factory=list)
    engine: Optional[ExpansionEngine] = None


class ExpansionCache:
    """Expanded levels per diagram content hash, evicted after an idle timeout."""

    def __init__(self, timeout_minutes: int = 30, sweep_seconds: float = 300):
        """
        Initialize the cache.

        Args:
            timeout_minutes: Idle time after which an entry is evicted
            sweep_seconds: Interval of the background eviction sweep
        """
        self.timeout_minutes = timeout_minutes
        self.sweep_seconds = sweep_seconds
        self.runs: dict[str, CachedRun] = {}
        self.last_access: dict[str, datetime] = {}
        self._cleanup_task: Optional[asyncio.Task] = None

    async def start_cleanup_task(self):
        """Start the background eviction sweep."""
        if self._cleanup_task is None:
            self._cleanup_task = asyncio.create_task(self._evict_loop())

    async def stop_cleanup_task(self):
        if self._cleanup_task is not None:
            self._cleanup_task.cancel()
            try:
                await self._cleanup_task
            except asyncio.CancelledError:
                pass
            self._cleanup_task = None

    async def _evict_loop(self):
        while True:
            try:
                await asyncio.sleep(self.sweep_seconds)
                self.evict_expired()
            except asyncio.CancelledError:
                raise
            except Exception:
                logger.exception("Error in cache eviction sweep")

    def evict_expired(self, now: Optional[datetime] = None) -> list[str]:
        """Drop idle entries; returns the evicted keys."""
        now = now or datetime.now()
        expired = [
            key
            for key, last in self.last_access.items()
            if now - last > timedelta(minutes=self.timeout_minutes)
        ]
        for key in expired:
            self.delete(key)
        if expired:
            logger.info("Evicted %d cached expansions", len(expired))
        return expired

    def entry(self, diagram: MarkovDiagram) -> CachedRun:
        """The cached run of a diagram, created (validated, not expanded) on first use."""
        key = DiagramCodec.content_hash(diagram)
        run = self.runs.get(key)
        if run is None:
            run = CachedRun(diagram=diagram, report=DiagramValidator.validate_diagram(diagram))
            self.runs[key] = run
        self.last_access[key] = datetime.now()
        return run

    def levels(self, diagram: MarkovDiagram, depth: int) -> list[LevelState]:
        """
        Levels ``1..depth`` of a diagram, expanding only what is not cached yet.

        Raises:
            DiagramInvalid: the diagram cannot be expanded
            PreconditionFailed: depth below 1
        """
        if depth < 1:
            raise PreconditionFailed(f"depth must be at least 1, got {depth}")
        run = self.entry(diagram)
        if run.engine is None:
            run.engine = ExpansionEngine(diagram, run.report)
            run.levels = [LevelState(index=1, graph=diagram.start)]
        while len(run.levels) < depth:
            run.levels.append(run.engine.expand_once(run.levels[-1]))
        return run.levels[:depth]

    def delete(self, key: str) -> bool:
        if key in self.runs:
            del self.runs[key]
            del self.last_access[key]
            return True
        return False

    def __len__(self) -> int:
        return len(self.runs)
