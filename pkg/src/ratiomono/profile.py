"""Segmentation of the coefficient-ratio sequence into monotone runs.

The classifier dispatches entirely on data extracted here: the number of
monotonicity changes ``n`` of ``{a_k/b_k}`` after constant runs are
absorbed into their neighbors, the change indices (``m1 < m2`` when
``n = 2``), and the declared direction of the ratio tail beyond the
stored prefix.  Ties below ``tol_const`` count as equality, so a run of
equal ratios never manufactures a change.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import HypothesisViolationError, InsufficientDataError
from .series import PowerSeries, ZERO_TAIL

__all__ = [
    "Direction",
    "Segment",
    "RatioProfile",
    "validate_denominator",
    "build_profile",
    "shift_profile",
    "segment_ratio_values",
]


class Direction(str, Enum):
    INCREASING = "increasing"
    DECREASING = "decreasing"
    CONSTANT = "constant"

    @property
    def sign(self) -> int:
        return {"increasing": 1, "decreasing": -1, "constant": 0}[self.value]

    @staticmethod
    def from_sign(s: int) -> "Direction":
        return {1: Direction.INCREASING, -1: Direction.DECREASING, 0: Direction.CONSTANT}[s]

    @property
    def flipped(self) -> "Direction":
        return Direction.from_sign(-self.sign)


@dataclass(frozen=True)
class Segment:
    start: int
    end: int
    direction: Direction


@dataclass(frozen=True)
class RatioProfile:
    """Monotone segmentation of the ratio sequence over the stored prefix."""

    ratios: tuple[float, ...]
    segments: tuple[Segment, ...]
    change_count: int
    change_indices: tuple[int, ...]
    strict_at_zero: int  # sign of c_1 - c_0 at tol_const
    tail_direction: Direction
    tol_const: float

    @property
    def m1(self) -> int | None:
        return self.change_indices[0] if self.change_count >= 1 else None

    @property
    def m2(self) -> int | None:
        return self.change_indices[1] if self.change_count >= 2 else None

    @property
    def is_constant(self) -> bool:
        return len(self.segments) == 1 and self.segments[0].direction is Direction.CONSTANT

    @property
    def orientation(self) -> Direction:
        """Direction of the first (non-constant unless trivial) segment."""
        return self.segments[0].direction

    @property
    def directions(self) -> tuple[Direction, ...]:
        return tuple(s.direction for s in self.segments)


def validate_denominator(b: PowerSeries) -> None:
    """Check ``b_k > 0`` over the stored prefix and beyond it.

    Beyond the prefix, positivity must be guaranteed structurally: a finite
    tail (nothing there) or a kernel closed form (all families have
    positive coefficients).  A bare magnitude-ratio tail cannot certify a
    sign, so it is rejected.
    """
    for k, bk in enumerate(b.coeffs):
        if not bk > 0.0:
            raise HypothesisViolationError(
                f"denominator hypothesis b_k > 0 fails at k = {k} (b_{k} = {bk!r})", index=k
            )
    if b.tail is not ZERO_TAIL and not hasattr(b.tail, "closed_value"):
        raise HypothesisViolationError(
            "denominator tail descriptor cannot guarantee positivity beyond the stored prefix; "
            "use a finite polynomial or a built-in kernel"
        )


def _diff_signs(values: np.ndarray, tol: float) -> np.ndarray:
    d = np.diff(values)
    return np.where(d > tol, 1, np.where(d < -tol, -1, 0)).astype(int)


def segment_ratio_values(
    ratios,
    tail_direction: Direction,
    tol_const: float,
) -> tuple[tuple[Segment, ...], int, tuple[int, ...], int]:
    """Core segmentation shared by profile building and recounting.

    Returns ``(segments, change_count, change_indices, strict_at_zero)``.
    The declared tail direction acts as one virtual difference beyond the
    stored prefix; a constant tail (or a finite pair) contributes nothing
    and is absorbed per the one-change-not-two convention.
    """
    vals = np.asarray(ratios, dtype=float)
    if vals.size < 2:
        raise InsufficientDataError(
            f"need at least 2 ratio values to segment, got {vals.size}"
        )
    signs = _diff_signs(vals, tol_const)
    n_diffs = len(signs)
    if tail_direction is not Direction.CONSTANT:
        signs = np.append(signs, tail_direction.sign)

    runs: list[tuple[int, int]] = []  # (sign, first diff index)
    for idx, s in enumerate(signs):
        if s == 0:
            continue
        if not runs or runs[-1][0] != s:
            runs.append((int(s), idx))

    last = vals.size - 1
    if not runs:
        segments = (Segment(0, last, Direction.CONSTANT),)
        return segments, 0, (), 0

    change_indices = tuple(min(idx, last) for _, idx in runs[1:])
    boundaries = (0,) + change_indices + (last,)
    segments = tuple(
        Segment(boundaries[i], boundaries[i + 1], Direction.from_sign(runs[i][0]))
        for i in range(len(runs))
    )
    strict_at_zero = int(np.sign(vals[1] - vals[0])) if abs(vals[1] - vals[0]) > tol_const else 0
    return segments, len(runs) - 1, change_indices, strict_at_zero


def _ratio_values(a: PowerSeries, b: PowerSeries) -> np.ndarray:
    if a.scheme is not b.scheme:
        raise ValueError(f"index schemes differ: {a.scheme.name} vs {b.scheme.name}")
    if a.n_terms != b.n_terms:
        raise ValueError(f"prefix lengths differ: {a.n_terms} vs {b.n_terms}")
    return a.coeff_array() / b.coeff_array()


def build_profile(
    a: PowerSeries,
    b: PowerSeries,
    tol_const: float = 1e-12,
    tail_direction: Direction = Direction.CONSTANT,
) -> RatioProfile:
    """Segment ``{a_k / b_k}`` over the stored prefix.

    ``tail_direction`` declares how the ratio sequence behaves beyond the
    prefix; it is never extrapolated from the stored values.
    """
    validate_denominator(b)
    ratios = _ratio_values(a, b)
    segments, n, changes, strict0 = segment_ratio_values(ratios, tail_direction, tol_const)
    return RatioProfile(
        ratios=tuple(float(c) for c in ratios),
        segments=segments,
        change_count=n,
        change_indices=changes,
        strict_at_zero=strict0,
        tail_direction=tail_direction,
        tol_const=tol_const,
    )


def shift_profile(
    a: PowerSeries,
    b: PowerSeries,
    tol_const: float = 1e-12,
    tail_direction: Direction = Direction.CONSTANT,
) -> RatioProfile:
    """Profile of the index-shifted sequence ``{a_{k+1} / b_{k+1}}``.

    Equals the profile of the derivative pair: the positive factors
    ``(k+1)`` cancel in the ratio.
    """
    validate_denominator(b)
    ratios = _ratio_values(a, b)[1:]
    segments, n, changes, strict0 = segment_ratio_values(ratios, tail_direction, tol_const)
    return RatioProfile(
        ratios=tuple(float(c) for c in ratios),
        segments=segments,
        change_count=n,
        change_indices=changes,
        strict_at_zero=strict0,
        tail_direction=tail_direction,
        tol_const=tol_const,
    )
