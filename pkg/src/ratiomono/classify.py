"""Rule dispatch: from profile and endpoint signs to a guaranteed shape.

The decision tree follows the change count ``n`` of the ratio sequence:

* n = 0: the ratio function inherits the sequence's direction outright.
* n = 1: the endpoint sign of H decides between monotone and one turn.
* n = 2: the pair of endpoint signs (base and derivative pair), plus an
  interior sign scan in the doubly-positive case, selects one of ten
  table rows; rows 1-5 for profiles that rise-fall-rise, rows 6-10
  mirrored.
* n >= 3: only the counting bound (the ratio function changes direction
  at most n times) is asserted.

Sign ties (an endpoint value classified zero) satisfy both the >= and <=
branches; the classifier deterministically prefers the verdict with
fewer turning points and records the tie.  In the one genuine overlap --
base sign zero with derivative sign strictly positive -- the zero limit
is approached from below, so the ratio ends decreasing and the single
turn verdict (row 4/9) is the sharp one; the interior witness that the
overlap guarantees is located and recorded as evidence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .config import AnalysisConfig, DEFAULT_CONFIG
from .errors import (
    AmbiguousClassificationError,
    ClassificationIncompleteError,
    TruncationError,
    UndeterminedLimitError,
)
from .grids import composite_grid
from .hfunc import (
    EndpointSignature,
    HEvaluator,
    Sign,
    SignValue,
    cross_difference,
    effective_top,
    h_at_zero,
    h_endpoint_limit,
)
from .instance import RatioPair
from .kernels import kernel_h_limit
from .patterns import ClassificationReport, MonotonicityPattern, Rule, Shape
from .profile import Direction, RatioProfile, segment_ratio_values
from .series import PowerSeries
from .turning import locate_turning_points

__all__ = [
    "LocalBehavior",
    "ScanResult",
    "classify",
    "classify_two_changes",
    "scan_h_sign",
    "local_behavior",
    "max_changes_bound",
    "endpoint_signature",
    "infinite_scan_bound",
]


class LocalBehavior(str, Enum):
    INC_NEAR_ZERO = "inc-near-zero"
    DEC_NEAR_ZERO = "dec-near-zero"
    UNDETERMINED = "undetermined"


@dataclass(frozen=True)
class ScanResult:
    """Outcome of a sign scan of H over a composite grid."""

    look_for: Sign
    witness_x: float | None
    witness_value: float | None
    certified: bool  # the sought strict sign never occurred on the grid
    extreme_x: float
    extreme_value: float
    grid_points: int
    note: str

    @property
    def found(self) -> bool:
        return self.witness_x is not None


def scan_h_sign(
    f: PowerSeries,
    g: PowerSeries,
    grid_size: int,
    look_for: Sign = Sign.NEGATIVE,
    *,
    x_hi: float | None = None,
    tol_sign: float = 1e-8,
) -> ScanResult:
    """Scan H over a composite grid for a strict sign witness.

    Returns the first point where H has the sought sign beyond its local
    tolerance, or a grid certificate that the sign never occurs, carrying
    the extreme value observed (the minimum for a negative hunt, the
    maximum for a positive one).
    """
    if grid_size < 2:
        raise ValueError(f"grid size must be >= 2, got {grid_size}")
    if look_for is Sign.ZERO:
        raise ValueError("scan looks for a strict sign, not zero")
    finite = math.isfinite(g.radius)
    hi = g.radius if finite else (x_hi if x_hi is not None else 64.0)
    xs = composite_grid(hi, grid_size, finite_endpoint=finite)
    ev = HEvaluator(f, g)
    vals, errs, scales = ev(xs, with_scale=True)
    tol = errs + tol_sign * np.maximum(1.0, scales)
    strict = vals < -tol if look_for is Sign.NEGATIVE else vals > tol
    if look_for is Sign.NEGATIVE:
        ext = int(np.argmin(vals))
    else:
        ext = int(np.argmax(vals))
    if np.any(strict):
        first = int(np.argmax(strict))
        return ScanResult(
            look_for=look_for,
            witness_x=float(xs[first]),
            witness_value=float(vals[first]),
            certified=False,
            extreme_x=float(xs[ext]),
            extreme_value=float(vals[ext]),
            grid_points=len(xs),
            note=f"witness H({xs[first]:.6g}) = {vals[first]:.6g}",
        )
    word = "nonnegative" if look_for is Sign.NEGATIVE else "nonpositive"
    return ScanResult(
        look_for=look_for,
        witness_x=None,
        witness_value=None,
        certified=True,
        extreme_x=float(xs[ext]),
        extreme_value=float(vals[ext]),
        grid_points=len(xs),
        note=(
            f"H {word} over {len(xs)}-point grid (extreme {vals[ext]:.6g} "
            f"at x = {xs[ext]:.6g}); grid-certified, not proved"
        ),
    )


def infinite_scan_bound(pair: RatioPair, tol_sign: float = 1e-8) -> float:
    """Right edge for scans and verification on an infinite domain.

    All turning points guaranteed by the rules sit where H still fights
    its tail sign.  For polynomial pairs every sign change of H is a root
    of the cross-difference F'G - FG', so its Cauchy root bound caps them
    exactly.  For kernel pairs the bound marches outward by octaves until
    H's strict sign has locked (same sign, growing magnitude, three
    octaves in a row), stopping early where tail certification ends.
    """
    if pair.kernel is None:
        cross, mags = cross_difference(pair.numerator, pair.denominator)
        top = effective_top(cross, mags, 64 * np.finfo(float).eps)
        if top is None or top == 0:
            return 8.0
        cauchy = 1.0 + float(np.max(np.abs(cross[:top]))) / abs(cross[top])
        return float(min(max(8.0, 2.0 * cauchy), 1e6))
    delta = pair.deviation()
    ev = HEvaluator(delta, pair.denominator)
    d = pair.kernel.param
    cap = 600.0 / d
    x = max(1.0, 4.0 / d)
    streak = 0
    prev_sign, prev_abs = 0, math.inf
    while x < cap:
        try:
            v, e, s = ev(np.array([x]), with_scale=True)
        except (TruncationError, OverflowError):
            return x
        val = float(v[0])
        tol = float(e[0]) + tol_sign * max(1.0, float(s[0]))
        if not math.isfinite(val):
            return x
        sign = 1 if val > tol else (-1 if val < -tol else 0)
        if sign != 0 and sign == prev_sign and abs(val) >= prev_abs:
            streak += 1
            if streak >= 3:
                return min(2.0 * x, cap)
        else:
            streak = 0
        prev_sign, prev_abs = sign, abs(val)
        x *= 2.0
    return cap


def local_behavior(
    a: PowerSeries, b: PowerSeries, m: int, tol_const: float = 1e-12
) -> LocalBehavior:
    """Guaranteed direction of A/B just right of 0.

    Requires the ratio sequence strictly monotone over slots [0, m] with
    m >= 1; the direction of ``c_1 - c_0`` then holds on some (0, x0).
    Returns UNDETERMINED when strictness fails anywhere in the window.
    """
    if m < 1:
        raise ValueError(f"local rule needs m >= 1, got {m}")
    if a.n_terms < m + 1 or b.n_terms < m + 1:
        raise ValueError(f"local rule over [0, {m}] needs {m + 1} stored slots")
    c = a.coeff_array()[: m + 1] / b.coeff_array()[: m + 1]
    diffs = np.diff(c)
    if np.all(diffs > tol_const):
        return LocalBehavior.INC_NEAR_ZERO
    if np.all(diffs < -tol_const):
        return LocalBehavior.DEC_NEAR_ZERO
    return LocalBehavior.UNDETERMINED


def max_changes_bound(profile: RatioProfile, l: int) -> int:
    """Counting bound for the ratio of l-th derivatives.

    The derivative pair's ratio sequence is the index shift by l, so its
    change count (never above the base count) is the asserted bound.
    """
    if l < 0:
        raise ValueError(f"derivative order must be >= 0, got {l}")
    if l == 0:
        return profile.change_count
    shifted = np.asarray(profile.ratios[l:], dtype=float)
    if shifted.size < 2:
        return 0
    _, n, _, _ = segment_ratio_values(shifted, profile.tail_direction, profile.tol_const)
    return min(n, profile.change_count)


def endpoint_signature(
    pair: RatioPair,
    cfg: AnalysisConfig = DEFAULT_CONFIG,
    need_derivative: bool = True,
) -> EndpointSignature:
    """Signs of H at 0+ and at the right endpoint for base/derivative pairs.

    Kernel denominators go through the closed-form machinery on the
    deviation series; raw pairs are sampled (finite radius) or resolved
    by exact degree comparison (polynomials on (0, inf)).
    """
    h0 = h_at_zero(pair.numerator, pair.denominator, cfg.tol_sign)
    traces: dict = {}
    delta = pair.deviation()
    if pair.kernel is not None:
        direction = pair.tail.direction(float(pair.ratios[-1]), cfg.tol_const)
        h_end, trace, method = kernel_h_limit(
            pair.kernel, delta, "base", direction, cfg.tol_sign
        )
        traces["h_end"] = trace
        h_dend = None
        if need_derivative:
            h_dend, trace_d, _ = kernel_h_limit(
                pair.kernel, delta, "derivative", direction, cfg.tol_sign
            )
            traces["h_deriv_end"] = trace_d
    else:
        h_end, trace, method = h_endpoint_limit(delta, pair.denominator, cfg.tol_sign)
        traces["h_end"] = trace
        h_dend = None
        if need_derivative:
            dpair = pair.derivative_pair()
            h_dend, trace_d, _ = h_endpoint_limit(
                dpair.deviation(), dpair.denominator, cfg.tol_sign
            )
            traces["h_deriv_end"] = trace_d
    return EndpointSignature(h0, h_end, h_dend, method, traces)


def _mono_shape(direction: Direction) -> Shape:
    return Shape.INC if direction is Direction.INCREASING else Shape.DEC


def _one_turn_shape(direction: Direction) -> Shape:
    return Shape.INC_DEC if direction is Direction.INCREASING else Shape.DEC_INC


def _three_shape(direction: Direction) -> Shape:
    return Shape.INC_DEC_INC if direction is Direction.INCREASING else Shape.DEC_INC_DEC


def classify_two_changes(
    profile: RatioProfile,
    sig: EndpointSignature,
    scanner,
) -> tuple[Shape, str, int, dict]:
    """Map the endpoint signs of a two-change profile to a table row.

    ``scanner(look_for) -> ScanResult`` supplies the interior sign
    evidence when both endpoint signs are strictly on the rising side.
    Returns ``(shape, branch, table_row, extras)`` where extras carries
    ties, witness data, and grid certificates.
    """
    orientation = profile.orientation
    sigma = orientation.sign  # +1: rise-fall-rise profile; -1: mirrored
    if sigma == 0:
        raise AmbiguousClassificationError("two-change profile with constant first segment")
    s1 = int(sig.h_at_end.classification) * sigma
    s2 = int(sig.h_deriv_at_end.classification) * sigma
    row_offset = 0 if sigma > 0 else 5
    witness_sign = Sign.NEGATIVE if sigma > 0 else Sign.POSITIVE
    extras: dict = {"ties": [], "witness_x0": None, "witness_value": None, "grid_note": None}

    def tie(which: str):
        extras["ties"].append(
            f"{which} endpoint sign is zero at tolerance; it satisfies both inequality "
            "branches and the fewer-turning-point verdict is preferred"
        )

    if s2 <= 0:
        if s2 == 0:
            tie("derivative-pair")
        if s1 >= 0:
            if s1 == 0:
                tie("base-pair")
            return _mono_shape(orientation), "i", 1 + row_offset, extras
        return _one_turn_shape(orientation), "iii", 3 + row_offset, extras

    # s2 > 0 strictly.
    if s1 < 0:
        return _one_turn_shape(orientation), "iv", 4 + row_offset, extras
    if s1 == 0:
        # Zero limit approached from below (H rises at the end), so the ratio
        # ends on its falling side: the single-turn verdict is sharp, and an
        # interior witness must exist; record it as evidence.
        tie("base-pair")
        scan = scanner(witness_sign)
        if scan.found:
            extras["witness_x0"] = scan.witness_x
            extras["witness_value"] = scan.witness_value
        else:
            extras["ties"].append(
                "interior witness implied by the zero/positive endpoint combination "
                f"was not resolved on the grid ({scan.note})"
            )
        return _one_turn_shape(orientation), "iv", 4 + row_offset, extras

    # s1 > 0 and s2 > 0: the interior sign of H decides between the
    # monotone verdict (sign certified everywhere) and the double turn.
    scan = scanner(witness_sign)
    if scan.found:
        extras["witness_x0"] = scan.witness_x
        extras["witness_value"] = scan.witness_value
        return _three_shape(orientation), "v", 5 + row_offset, extras
    if scan.certified:
        extras["grid_note"] = scan.note
        return _mono_shape(orientation), "ii", 2 + row_offset, extras
    raise AmbiguousClassificationError(
        "interior scan neither certified the sign nor produced a witness",
        candidates=[2 + row_offset, 5 + row_offset],
    )


def classify(pair: RatioPair, cfg: AnalysisConfig = DEFAULT_CONFIG) -> ClassificationReport:
    """Classify the monotonicity pattern of the pair's ratio on (0, r).

    Produces the guaranteed shape, the rule and branch that yielded it,
    endpoint numerics, and turning-point brackets where the shape has
    them.  Raises ``ClassificationIncompleteError`` (carrying partial
    evidence) when an endpoint limit cannot be certified.
    """
    profile = pair.profile(cfg.tol_const)
    n = profile.change_count
    cond: dict = {"n": n, "m1": profile.m1, "m2": profile.m2}

    if n == 0:
        h0 = h_at_zero(pair.numerator, pair.denominator, cfg.tol_sign)
        sig = EndpointSignature(h0, SignValue(0.0, math.inf), None, "not-needed", {})
        shape = Shape.CONSTANT if profile.is_constant else _mono_shape(profile.orientation)
        pattern = MonotonicityPattern(shape)
        return ClassificationReport(
            pattern, Rule.MR1, None, None, profile, sig,
            condition_values=cond, normalization=pair.normalization, config=cfg,
        )

    if n >= 3:
        h0 = h_at_zero(pair.numerator, pair.denominator, cfg.tol_sign)
        sig = EndpointSignature(h0, SignValue(0.0, math.inf), None, "not-needed", {})
        pattern = MonotonicityPattern(Shape.BOUND_ONLY, change_bound=n)
        return ClassificationReport(
            pattern, Rule.COUNT_BOUND, None, None, profile, sig,
            condition_values=cond, normalization=pair.normalization, config=cfg,
        )

    try:
        sig = endpoint_signature(pair, cfg, need_derivative=(n == 2))
    except UndeterminedLimitError as exc:
        raise ClassificationIncompleteError(
            f"cannot certify the endpoint limit: {exc}",
            evidence={"profile": profile, "trace": exc.trace},
        ) from exc
    cond["H_0"] = sig.h_at_zero.magnitude
    cond["H_end"] = sig.h_at_end.magnitude
    if sig.h_deriv_at_end is not None:
        cond["H_deriv_end"] = sig.h_deriv_at_end.magnitude

    delta = pair.deviation()
    finite = math.isfinite(pair.radius)
    ties: list[str] = []
    witness_x = witness_val = None
    grid_note = None

    if n == 1:
        orientation = profile.orientation
        s1 = int(sig.h_at_end.classification) * orientation.sign
        if s1 == 0:
            ties.append(
                "base-pair endpoint sign is zero at tolerance; the monotone branch "
                "(its non-strict inequality) applies"
            )
        shape = _mono_shape(orientation) if s1 >= 0 else _one_turn_shape(orientation)
        rule, branch, row = Rule.MR5, None, None
    else:
        x_hi = None
        if not finite:
            x_hi = infinite_scan_bound(pair, cfg.tol_sign)
            cond["x_max"] = x_hi

        def scanner(look_for: Sign) -> ScanResult:
            return scan_h_sign(
                delta, pair.denominator, cfg.grid_size, look_for,
                x_hi=x_hi, tol_sign=cfg.tol_sign,
            )

        shape, branch, row, extras = classify_two_changes(profile, sig, scanner)
        rule = Rule.MR_TWO_CHANGE
        ties.extend(extras["ties"])
        witness_x = extras["witness_x0"]
        witness_val = extras["witness_value"]
        grid_note = extras["grid_note"]
        if witness_x is not None:
            cond["H_x0"] = witness_val

    brackets = ()
    if shape.turning_point_count:
        x_hi = pair.radius if finite else infinite_scan_bound(pair, cfg.tol_sign)
        tol = cfg.tol_bisect_rel * x_hi
        brackets = locate_turning_points(
            delta, pair.denominator, shape, tol,
            x_hi=x_hi, finite_endpoint=finite, tol_sign=cfg.tol_sign,
        )
    pattern = MonotonicityPattern(shape, brackets)
    return ClassificationReport(
        pattern, rule, branch, row, profile, sig,
        witness_x0=witness_x, witness_value=witness_val,
        grid_note=grid_note, ties=tuple(ties),
        condition_values=cond, normalization=pair.normalization, config=cfg,
    )
