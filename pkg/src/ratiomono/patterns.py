"""Result vocabulary: shapes, rules, patterns, classification reports."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .config import AnalysisConfig
from .hfunc import EndpointSignature
from .profile import RatioProfile


class Shape(str, Enum):
    CONSTANT = "constant"
    INC = "inc"
    DEC = "dec"
    INC_DEC = "inc-dec"
    DEC_INC = "dec-inc"
    INC_DEC_INC = "inc-dec-inc"
    DEC_INC_DEC = "dec-inc-dec"
    BOUND_ONLY = "bound-only"

    @property
    def turning_point_count(self) -> int:
        return {
            Shape.INC_DEC: 1,
            Shape.DEC_INC: 1,
            Shape.INC_DEC_INC: 2,
            Shape.DEC_INC_DEC: 2,
        }.get(self, 0)

    @property
    def mirrored(self) -> "Shape":
        swap = {
            Shape.INC: Shape.DEC,
            Shape.DEC: Shape.INC,
            Shape.INC_DEC: Shape.DEC_INC,
            Shape.DEC_INC: Shape.INC_DEC,
            Shape.INC_DEC_INC: Shape.DEC_INC_DEC,
            Shape.DEC_INC_DEC: Shape.INC_DEC_INC,
        }
        return swap.get(self, self)


class Rule(str, Enum):
    MR1 = "MR1"                      # zero changes: monotone ratio sequence
    MR5 = "MR5"                      # one change: endpoint sign decides
    MR_TWO_CHANGE = "MR-two-change"  # two changes: the ten-row table
    COUNT_BOUND = "count-bound"      # three or more: only the counting bound


@dataclass(frozen=True)
class MonotonicityPattern:
    """Classified shape with turning-point brackets where the shape has them."""

    shape: Shape
    turning_points: tuple = ()  # RootBracket instances, ordered, disjoint
    change_bound: int | None = None  # populated for bound-only verdicts

    def __post_init__(self):
        want = self.shape.turning_point_count
        if self.turning_points and len(self.turning_points) != want:
            raise ValueError(
                f"shape {self.shape.value} carries {want} turning points, "
                f"got {len(self.turning_points)}"
            )


@dataclass(frozen=True)
class ClassificationReport:
    """A verdict plus the rule, branch, and numbers that produced it."""

    pattern: MonotonicityPattern
    rule: Rule
    branch: str | None                 # "i".."v", only for the two-change rule
    table_row: int | None              # 1..10, only for the two-change rule
    profile: RatioProfile
    signature: EndpointSignature | None
    witness_x0: float | None = None
    witness_value: float | None = None
    grid_note: str | None = None
    ties: tuple[str, ...] = ()
    condition_values: dict = field(default_factory=dict)
    normalization: str | None = None
    config: AnalysisConfig = field(default_factory=AnalysisConfig)

    def __post_init__(self):
        if (self.branch is not None) != (self.rule is Rule.MR_TWO_CHANGE):
            raise ValueError("condition branch is present exactly for the two-change rule")
