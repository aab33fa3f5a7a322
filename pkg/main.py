"""Main FastAPI application for markovkit."""

import logging
from contextlib import asynccontextmanager

from fastapi import FastAPI

from markovkit import __version__
from markovkit.api import checks_router, diagrams_router, export_router
from markovkit.config import Settings
from markovkit.services import ExpansionCache

settings = Settings.from_env()

# Configure logging
logging.basicConfig(
    level=getattr(logging, settings.log_level, logging.INFO),
    format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
)
logger = logging.getLogger(__name__)


@asynccontextmanager
async def lifespan(app: FastAPI):
    """Lifespan context manager for startup/shutdown events."""
    logger.info("Starting markovkit service...")
    cache = ExpansionCache(timeout_minutes=settings.cache_minutes)
    await cache.start_cleanup_task()
    app.state.expansion_cache = cache
    logger.info("Expansion cache initialized (%d min idle timeout)", settings.cache_minutes)

    yield

    logger.info("Shutting down markovkit service...")
    await cache.stop_cleanup_task()


app = FastAPI(
    title="markovkit",
    description="Batch surface of the Markov compacta diagram engine and checker",
    version=__version__,
    lifespan=lifespan,
)

app.include_router(diagrams_router)
app.include_router(checks_router)
app.include_router(export_router)


@app.get("/health")
async def health():
    """Health check endpoint."""
    return {"status": "healthy", "service": "markovkit", "version": __version__}


def main():
    """Run the application with uvicorn."""
    import uvicorn

    uvicorn.run(
        "main:app",
        host="0.0.0.0",
        port=8000,
        log_level=settings.log_level.lower(),
    )


if __name__ == "__main__":
    main()
