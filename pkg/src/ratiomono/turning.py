"""Turning-point localization: bracketing the sign changes of H.

The critical points of F/G are exactly the zeros of H (the positive
factor G'/G^2 never flips the sign), so each guaranteed extremum is
isolated as a sign-change bracket of H and narrowed by bisection.
Bisection over Newton: H is only tolerance-accurate, and a bracket with
certified opposite endpoint signs survives evaluation noise.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import LocalizationFailureError
from .grids import composite_grid
from .hfunc import HEvaluator
from .patterns import Shape

__all__ = ["RootBracket", "locate_turning_points"]


@dataclass(frozen=True)
class RootBracket:
    """An interval with strict opposite signs of H at its ends."""

    lo: float
    hi: float
    sign_left: int
    sign_right: int

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.lo + self.hi)

    def contains(self, x: float, slack: float = 0.0) -> bool:
        return self.lo - slack <= x <= self.hi + slack


def _strict_signs(values: np.ndarray, errs: np.ndarray, scales: np.ndarray, tol_sign: float):
    tol = errs + tol_sign * np.maximum(1.0, scales)
    return np.where(values > tol, 1, np.where(values < -tol, -1, 0)).astype(int)


def _alternation_brackets(xs: np.ndarray, signs: np.ndarray) -> list[tuple[float, float, int, int]]:
    """Pairs of consecutive strict-sign samples with opposite signs.

    Zero-classified samples in between are allowed (they sit inside the
    bracket); what is not allowed is a strict sample of the old sign.
    """
    out = []
    prev_idx = None
    for i, s in enumerate(signs):
        if s == 0:
            continue
        if prev_idx is not None and s != signs[prev_idx]:
            out.append((float(xs[prev_idx]), float(xs[i]), int(signs[prev_idx]), int(s)))
        prev_idx = i
    return out


def locate_turning_points(
    f,
    g,
    shape: Shape,
    tol: float,
    *,
    x_hi: float,
    finite_endpoint: bool,
    tol_sign: float = 1e-8,
    grid_size: int = 1024,
    max_refinements: int = 3,
) -> tuple[RootBracket, ...]:
    """Bracket the turning points the classified shape guarantees.

    Scans H on the composite grid for exactly the expected number of sign
    alternations (1 for single-turn shapes, 2 for the three-segment
    shapes), refining the grid up to ``max_refinements`` times by a
    factor of 4, then bisects each alternation to width <= tol.

    Raises ``LocalizationFailureError`` when the expected count never
    appears; tangential zeros of H land here by design.
    """
    expected = shape.turning_point_count
    if expected == 0:
        return ()
    ev = HEvaluator(f, g)
    attempts = []
    size = grid_size
    for _ in range(max_refinements + 1):
        xs = composite_grid(x_hi, size, finite_endpoint)
        vals, errs, scales = ev(xs, with_scale=True)
        signs = _strict_signs(vals, errs, scales, tol_sign)
        raw = _alternation_brackets(xs, signs)
        attempts.append({"grid_size": int(len(xs)), "alternations": len(raw)})
        if len(raw) == expected:
            return tuple(_bisect(ev, *b, tol) for b in raw)
        size *= 4
    raise LocalizationFailureError(
        f"expected {expected} sign alternation(s) of H for shape {shape.value}, "
        f"scan found {attempts[-1]['alternations']} at the maximum refinement",
        trace=attempts,
    )


def _bisect(ev: HEvaluator, lo: float, hi: float, sign_left: int, sign_right: int, tol: float) -> RootBracket:
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:  # hit float resolution
            break
        v, _ = ev(mid)
        if (float(np.atleast_1d(v)[0]) > 0) == (sign_left > 0):
            lo = mid
        else:
            hi = mid
    return RootBracket(lo, hi, sign_left, sign_right)
