"""Defaults and environment settings."""

import os
from fractions import Fraction

from pydantic import BaseModel, Field

from markovkit import __version__

TOOL_VERSION = __version__
CERTIFICATE_SCHEMA = "markovkit.certificate/1"
LEVELS_SCHEMA = "markovkit.levels/1"

DEFAULT_DEPTH = 4
DEFAULT_KAPPA = Fraction(1)
DEFAULT_SCHEDULE = "halving"

# Exhaustive disjoint-path search is only attempted on graphs up to this size.
EXHAUSTIVE_PATH_LIMIT = 20
# Above that size, candidate first paths tried when the flow pairs the terminals the other way.
LARGE_PATH_CANDIDATES = 200

LIPSCHITZ_REPORT_CAP = 25
DEFAULT_THREAD_LIMIT = 100

DIAGRAM_SUFFIX = ".mdgm"
CERTIFICATE_SUFFIX = ".mcert"


class Settings(BaseModel):
    """Runtime settings read from the environment."""

    log_level: str = Field("INFO", description="Logging level name")
    cache_minutes: int = Field(30, description="Idle timeout of cached expansions")

    @classmethod
    def from_env(cls, default_log_level: str = "INFO") -> "Settings":
        return cls(
            log_level=os.environ.get("MARKOVKIT_LOG_LEVEL", default_log_level).upper(),
            cache_minutes=int(os.environ.get("MARKOVKIT_CACHE_MINUTES", "30")),
        )
