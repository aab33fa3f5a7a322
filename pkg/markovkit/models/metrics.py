"""Scale schedules, threads and metric bounds."""

from fractions import Fraction
from typing import Literal, Optional

from pydantic import BaseModel, Field, field_validator

from markovkit.models.complex import GraphPoint, Rational


class MetricSchedule(BaseModel):
    """Edge length ``kappa_i`` for every level ``i >= 1``.

    ``custom`` lists kappa_1..kappa_m explicitly; past the list the schedule
    keeps halving from the last value.
    """

    rule: Literal["halving", "constant", "custom"] = "halving"
    kappa1: Rational = Fraction(1)
    values: list[Rational] = Field(default_factory=list)

    @field_validator("kappa1")
    @classmethod
    def _positive(cls, value: Fraction) -> Fraction:
        if value <= 0:
            raise ValueError("kappa must be positive")
        return value

    @field_validator("values")
    @classmethod
    def _all_positive(cls, values: list[Fraction]) -> list[Fraction]:
        if any(v <= 0 for v in values):
            raise ValueError("every kappa must be positive")
        return values

    def kappa(self, level: int) -> Fraction:
        if level < 1:
            raise ValueError(f"levels start at 1, got {level}")
        if self.rule == "constant":
            return self.kappa1
        if self.rule == "custom" and self.values:
            if level <= len(self.values):
                return self.values[level - 1]
            return self.values[-1] / 2 ** (level - len(self.values))
        return self.kappa1 / 2 ** (level - 1)

    @property
    def tail_finite(self) -> bool:
        return self.rule != "constant"

    def tail_sum(self, level: int) -> Optional[Fraction]:
        """Exact ``sum_{j > level} kappa_j``, or None when it diverges."""
        if not self.tail_finite:
            return None
        if self.rule == "custom" and self.values and level < len(self.values):
            listed = sum(self.values[level:], Fraction(0))
            # the halving continuation after the list sums to its last value
            return listed + self.values[-1]
        return self.kappa(level)

    def label(self) -> str:
        if self.rule == "custom":
            return "list:" + ",".join(str(v) for v in self.values)
        return f"{self.rule}:{self.kappa1}"


class MeshBound(BaseModel):
    level: int
    kappa: Rational
    diameter: int = Field(description="Largest component diameter of the assigned tops, in edges")
    mesh: Rational
    tail: Optional[Rational] = Field(default=None, description="Sum of the mesh bounds past level")
    divergent: bool = False


class LipschitzViolation(BaseModel):
    level: int
    u: str
    v: str
    domain_distance: Optional[Rational]
    image_distance: Optional[Rational]


class LipschitzReport(BaseModel):
    ok: bool
    checked_pairs: int
    violations: list[LipschitzViolation] = Field(default_factory=list)
    violation_count: int = 0
    truncated: bool = False


class ThreadCell(BaseModel):
    level: int
    kind: Literal["vertex", "edge"]
    cell: str


class Thread(BaseModel):
    """A vertex of the deepest level followed down through every coarser level.

    ``points[k]`` is the image at level ``k + 1``; ``cells[k]`` is the cell
    carrying it.
    """

    cells: list[ThreadCell]
    points: list[GraphPoint]

    @property
    def depth(self) -> int:
        return len(self.points)


class ThreadEnumeration(BaseModel):
    depth: int
    threads: list[Thread]
    total: int
    truncated: bool = Field(default=False, description="LimitExceeded: more threads than the limit")


class ThreadCheck(BaseModel):
    ok: bool
    failed_level: Optional[int] = None
    detail: str = ""


class DistanceBound(BaseModel):
    level: int
    lower: Rational
    upper: Optional[Rational] = Field(default=None, description="None for separated threads")
    tail: Rational
    separated: bool = False


class ComponentCount(BaseModel):
    """Components of one level, a proxy for epsilon-connectivity of the limit."""

    level: int
    components: int


class MetricSummary(BaseModel):
    schedule: str
    lipschitz_ok: bool
    lipschitz_violations: int
    first_violation: Optional[LipschitzViolation] = None
    mesh: list[MeshBound] = Field(default_factory=list)
    tail_finite: bool
    components: list[ComponentCount] = Field(default_factory=list)
