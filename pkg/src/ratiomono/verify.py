"""Empirical validation of classifications and hypothesis-directed fuzzing.

Every classification can be checked against dense samples of the ratio
itself: segment the sampled values into monotone runs (with a small
noise window so turning points do not shed spurious micro-segments),
compare with the predicted shape, and confirm each predicted bracket
contains an empirical extremum.

The fuzz generator builds ratio sequences with a requested number of
monotonicity changes -- random monotone segments joined at shared
endpoints, followed by a geometric approach to a finite limit -- and
pairs them with a random kernel or a random positive polynomial
denominator.  Generation is deterministic per (seed, index), so parallel
and serial runs agree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import AnalysisConfig, DEFAULT_CONFIG
from .errors import TruncationError
from .grids import composite_grid
from .hfunc import HEvaluator, check_identities
from .instance import (
    RatioPair,
    RatioTail,
    TailKind,
    pair_from_polynomials,
    pair_from_ratio_sequence,
)
from .kernels import KernelKind, KernelSpec
from .patterns import MonotonicityPattern, Shape
from .profile import Direction

__all__ = [
    "VerificationReport",
    "verify_pattern",
    "count_sign_changes",
    "empirical_runs",
    "FuzzInstance",
    "fuzz_instances",
    "FUZZ_ALGORITHM",
]

FUZZ_ALGORITHM = "segment-walk/halving-tail v1 (PCG64 streams keyed by (seed, index))"

_NOISE_WINDOW = 3  # consecutive strict comparisons needed to accept a direction


@dataclass(frozen=True)
class VerificationReport:
    """Dense-sampling check of a predicted pattern."""

    grid_points: int
    segments: tuple  # (x_start, x_end, Direction) empirical monotone runs
    empirical_changes: int
    agreement: bool
    bracket_hits: tuple[bool, ...]
    max_identity_deviation: float | None
    predicted_shape: Shape
    notes: tuple[str, ...] = ()


def count_sign_changes(values, tol: float = 0.0) -> int:
    """Alternations in the sign of successive differences, |d| <= tol ignored."""
    vals = np.asarray(values, dtype=float)
    if vals.size == 0:
        raise ValueError("need at least one value")
    d = np.diff(vals)
    signs = d[np.abs(d) > tol]
    if signs.size == 0:
        return 0
    signs = np.sign(signs)
    return int(np.count_nonzero(signs[1:] != signs[:-1]))


def empirical_runs(xs: np.ndarray, values: np.ndarray, tol: float, window: int = _NOISE_WINDOW):
    """Monotone runs of sampled values after noise suppression.

    Runs shorter than ``window`` strict comparisons are treated as
    turning-point noise and dropped; adjacent same-direction runs then
    merge.  Returns ``(runs, switches)`` where each run is
    ``(first_diff_index, last_diff_index, sign)`` and each switch is the
    sample index of the extremum between consecutive runs.
    """
    d = np.diff(values)
    signs = np.where(d > tol, 1, np.where(d < -tol, -1, 0)).astype(int)
    raw: list[list[int]] = []  # [sign, first, last]
    for i, s in enumerate(signs):
        if s == 0:
            continue
        if raw and raw[-1][0] == s:
            raw[-1][2] = i
        else:
            raw.append([s, i, i])
    kept = [r for r in raw if r[2] - r[1] + 1 >= window]
    merged: list[list[int]] = []
    for r in kept:
        if merged and merged[-1][0] == r[0]:
            merged[-1][2] = r[2]
        else:
            merged.append(list(r))
    switches = []
    for left, right in zip(merged[:-1], merged[1:]):
        lo, hi = left[2], right[1] + 1
        window_vals = values[lo : hi + 1]
        rel = int(np.argmax(window_vals)) if left[0] > 0 else int(np.argmin(window_vals))
        switches.append(lo + rel)
    runs = tuple((r[1], r[2], r[0]) for r in merged)
    return runs, switches


_SHAPE_RUNS = {
    Shape.CONSTANT: (),
    Shape.INC: (1,),
    Shape.DEC: (-1,),
    Shape.INC_DEC: (1, -1),
    Shape.DEC_INC: (-1, 1),
    Shape.INC_DEC_INC: (1, -1, 1),
    Shape.DEC_INC_DEC: (-1, 1, -1),
}


def verify_pattern(
    pair: RatioPair,
    pattern: MonotonicityPattern,
    grid: int = 4096,
    cfg: AnalysisConfig = DEFAULT_CONFIG,
    x_hi: float | None = None,
    with_identities: bool = True,
) -> VerificationReport:
    """Sample A/B densely and compare against the predicted pattern.

    Disagreement is reported, never raised.  For bound-only patterns the
    check is that the empirical change count stays within the bound.
    """
    if grid < 16:
        raise ValueError(f"verification grid must be >= 16 points, got {grid}")
    finite = math.isfinite(pair.radius)
    if x_hi is None:
        if finite:
            x_hi = pair.radius
        else:
            from .classify import infinite_scan_bound

            x_hi = infinite_scan_bound(pair, cfg.tol_sign)
    xs = composite_grid(x_hi, grid, finite_endpoint=finite)
    values = pair.ratio_values(xs)
    tol = 1e-12 * max(1.0, float(np.max(np.abs(values))))
    runs, switches = empirical_runs(xs, values, tol)
    directions = tuple(r[2] for r in runs)
    tau = max(len(directions) - 1, 0)

    notes: list[str] = []
    if pattern.shape is Shape.BOUND_ONLY:
        agreement = tau <= (pattern.change_bound or 0)
        if not agreement:
            notes.append(
                f"empirical change count {tau} exceeds the bound {pattern.change_bound}"
            )
    else:
        expected = _SHAPE_RUNS[pattern.shape]
        agreement = directions == expected
        if not agreement:
            notes.append(
                f"empirical run signs {directions} vs predicted {expected}"
            )

    hits: list[bool] = []
    if pattern.turning_points:
        for bracket, sw in zip(pattern.turning_points, switches):
            step = xs[min(sw + 1, len(xs) - 1)] - xs[max(sw - 1, 0)]
            hits.append(bracket.contains(float(xs[sw]), slack=float(step)))
        if len(switches) != len(pattern.turning_points):
            hits = hits + [False] * (len(pattern.turning_points) - len(switches))
        if not all(hits):
            agreement = False
            notes.append("an empirical extremum fell outside its predicted bracket")

    max_dev = None
    if with_identities:
        probe = xs[np.linspace(2, len(xs) - 3, 16).astype(int)]
        lo = 2.0 * cfg.fd_step
        probe = probe[(probe > lo) & (probe < x_hi - lo)]
        if probe.size:
            rep = check_identities(pair.deviation(), pair.denominator, probe, cfg.fd_step)
            max_dev = rep.max_deviation

    seg_tuples = tuple(
        (float(xs[first]), float(xs[last + 1]), Direction.from_sign(sign))
        for first, last, sign in runs
    )
    return VerificationReport(
        grid_points=len(xs),
        segments=seg_tuples,
        empirical_changes=tau,
        agreement=bool(agreement),
        bracket_hits=tuple(hits),
        max_identity_deviation=max_dev,
        predicted_shape=pattern.shape,
        notes=tuple(notes),
    )


@dataclass(frozen=True)
class FuzzInstance:
    index: int
    pair: RatioPair
    requested_changes: int
    label: str


_KERNEL_POOL = (
    "exp",
    "geometric",
    "recip_pow",
    "neglog",
    "sinh",
    "cosh",
    "poly",
    "poly-inf",
)


def _random_ratio_walk(rng: np.random.Generator, n_changes: int, first: int):
    """Strictly monotone segments joined at shared endpoints."""
    values = [float(rng.uniform(-1.0, 1.0))]
    direction = first
    for _ in range(n_changes + 1):
        steps = int(rng.integers(1, 6))  # segment of 2..6 values
        for _ in range(steps):
            values.append(values[-1] + direction * float(rng.uniform(0.05, 1.0)))
        direction = -direction
    last_direction = -direction  # direction of the final segment
    return np.array(values), last_direction


def fuzz_instances(
    n_changes: int,
    count: int,
    seed: int,
    first_direction: Direction | None = None,
    kernel_filter: str | None = None,
    cfg: AnalysisConfig = DEFAULT_CONFIG,
):
    """Yield ``count`` deterministic instances with the requested change count.

    Each instance's profile is checked to have exactly ``n_changes``
    changes (generator postcondition).  ``kernel_filter`` restricts the
    denominator pool to one entry of: exp, geometric, recip_pow, neglog,
    sinh, cosh, poly, poly-inf.
    """
    if n_changes < 0:
        raise ValueError("change count must be >= 0")
    pool = _KERNEL_POOL if kernel_filter is None else (kernel_filter,)
    for index in range(count):
        rng = np.random.default_rng([abs(int(seed)), index])
        if first_direction is None:
            first = 1 if rng.uniform() < 0.5 else -1
        else:
            first = first_direction.sign
        c, last_dir = _random_ratio_walk(rng, n_changes, first)
        choice = pool[int(rng.integers(0, len(pool)))]
        if choice in ("poly", "poly-inf"):
            radius = math.inf if choice == "poly-inf" else float(rng.uniform(0.8, 2.0))
            b = rng.uniform(0.5, 2.0, size=c.size)
            pair = pair_from_polynomials(c * b, b, radius)
            label = f"poly(r={'inf' if math.isinf(radius) else f'{radius:.3g}'})"
        else:
            spec = _random_spec(rng, choice)
            gap = float(rng.uniform(0.1, 1.0))
            limit = float(c[-1] + last_dir * gap)
            tail = RatioTail(TailKind.GEOMETRIC, limit=limit, decay=0.5)
            pair = pair_from_ratio_sequence(spec, c, cfg.n_terms, tail, cfg.tol_const)
            label = spec.label()
        profile = pair.profile(cfg.tol_const)
        if profile.change_count != n_changes:
            raise AssertionError(
                f"fuzz generator postcondition failed at index {index}: "
                f"requested {n_changes} changes, built {profile.change_count}"
            )
        yield FuzzInstance(index=index, pair=pair, requested_changes=n_changes, label=label)


def _random_spec(rng: np.random.Generator, choice: str) -> KernelSpec:
    if choice == "exp":
        return KernelSpec(KernelKind.EXP)
    if choice == "geometric":
        return KernelSpec(KernelKind.GEOMETRIC)
    if choice == "recip_pow":
        return KernelSpec(KernelKind.RECIP_POW, float(rng.uniform(0.6, 2.5)))
    if choice == "neglog":
        return KernelSpec(KernelKind.NEGLOG, float(rng.uniform(0.5, 1.5)))
    if choice == "sinh":
        return KernelSpec(KernelKind.SINH, float(rng.uniform(0.5, 2.0)))
    if choice == "cosh":
        return KernelSpec(KernelKind.COSH, float(rng.uniform(0.5, 2.0)))
    raise ValueError(f"unknown kernel pool entry {choice!r}")
