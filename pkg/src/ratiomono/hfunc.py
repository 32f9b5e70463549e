"""The H-function of a pair and its signs at 0+ and the right endpoint.

For differentiable F, G with G' != 0 the function ``H = (F'/G') G - F``
controls the monotonicity of F/G through

    (F/G)' = (G'/G^2) * H        and        H' = (F'/G')' * G.

Everything the classifier needs from analysis reduces to signs of H: its
value at 0+ (a pure coefficient formula), its one-sided limit at the
right endpoint, and its sign along interior grids.  All numeric signs
come with explicit tolerances; a sign that cannot be certified surfaces
as an error instead of a guess.

Endpoint limits are computed three ways depending on the instance:

* finite radius, sampled: evaluate H along the geometric schedule
  ``x_j = r (1 - 2^-j)``, j = 4..20, and Richardson-extrapolate; the
  trace is kept for the report.
* infinite domain, polynomial pair: the sign follows exactly from the
  cross-difference polynomial ``A'B - AB'`` (H equals that over B'),
  comparing effective degrees.
* infinite domain, kernel denominator: dominance analysis of the
  deviation series (see the kernels module).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import IntEnum

import numpy as np

from .errors import (
    HypothesisViolationError,
    InsufficientDataError,
    SingularPointError,
    TruncationError,
    UndeterminedLimitError,
)
from .series import PowerSeries, derivative, evaluate

__all__ = [
    "Sign",
    "SignValue",
    "EndpointSignature",
    "HEvaluator",
    "h_value",
    "h_at_zero",
    "sampled_endpoint_limit",
    "polynomial_infinity_limit",
    "h_endpoint_limit",
    "cross_difference",
    "effective_top",
    "IdentityReport",
    "check_identities",
]

_INF_DETECT = 1e12  # |H| beyond this, growing with stable sign, reads as +-inf


class Sign(IntEnum):
    NEGATIVE = -1
    ZERO = 0
    POSITIVE = 1


@dataclass(frozen=True)
class SignValue:
    """A magnitude with the tolerance band that decides its sign."""

    magnitude: float
    tolerance: float

    @property
    def classification(self) -> Sign:
        if abs(self.magnitude) <= self.tolerance:
            return Sign.ZERO
        return Sign.POSITIVE if self.magnitude > 0 else Sign.NEGATIVE

    @property
    def is_nonnegative(self) -> bool:
        return self.classification is not Sign.NEGATIVE

    @property
    def is_nonpositive(self) -> bool:
        return self.classification is not Sign.POSITIVE

    def describe(self) -> str:
        sym = {Sign.NEGATIVE: "-", Sign.ZERO: "0", Sign.POSITIVE: "+"}[self.classification]
        return f"{sym} ({self.magnitude:.6g} +- {self.tolerance:.2g})"


@dataclass(frozen=True)
class EndpointSignature:
    """Signs of H at 0+ and of the base/derivative pairs at the endpoint."""

    h_at_zero: SignValue
    h_at_end: SignValue
    h_deriv_at_end: SignValue | None
    method: str  # "kernel-closed-form" or "sampled-extrapolation"
    traces: dict = field(default_factory=dict)


class HEvaluator:
    """Evaluates H of a fixed pair at points, with propagated error bounds."""

    def __init__(self, f: PowerSeries, g: PowerSeries):
        self.f = f
        self.g = g
        self.fp = derivative(f)
        self.gp = derivative(g)

    def __call__(self, x, with_scale: bool = False):
        fv, fe = evaluate(self.f, x)
        gv, ge = evaluate(self.g, x)
        fpv, fpe = evaluate(self.fp, x)
        gpv, gpe = evaluate(self.gp, x)
        gp_floor = gpe + 1e-300
        if np.any(np.abs(gpv) <= gp_floor):
            bad = np.atleast_1d(np.asarray(x, float))[
                np.atleast_1d(np.abs(gpv) <= gp_floor)
            ]
            raise SingularPointError(
                f"denominator derivative vanishes (within its bound) at x = {float(bad.flat[0])}"
            )
        q = fpv / gpv
        qe = (fpe + np.abs(q) * gpe) / np.abs(gpv)
        h = q * gv - fv
        scale = np.abs(q * gv) + np.abs(fv)
        err = qe * np.abs(gv) + np.abs(q) * ge + fe + 16.0 * np.finfo(float).eps * scale
        if with_scale:
            return h, err, scale
        return h, err


def h_value(f: PowerSeries, g: PowerSeries, x):
    """H of the pair at x (scalar or array): ``(F'/G') G - F``."""
    val, _ = HEvaluator(f, g)(x)
    if np.ndim(x) == 0:
        return float(np.atleast_1d(val)[0])
    return val


def h_at_zero(a: PowerSeries, b: PowerSeries, tol_sign: float = 1e-8) -> SignValue:
    """Sign of H at 0+ from the first two slots: ``b_0 (a_1/b_1 - a_0/b_0)``."""
    if a.n_terms < 2 or b.n_terms < 2:
        raise InsufficientDataError("H(0+) needs the first two slots of both series")
    b0, b1 = b.coeffs[0], b.coeffs[1]
    if not (b0 > 0 and b1 > 0):
        raise HypothesisViolationError(
            f"H(0+) formula needs b_0, b_1 > 0, got b_0 = {b0!r}, b_1 = {b1!r}"
        )
    r1, r0 = a.coeffs[1] / b1, a.coeffs[0] / b0
    value = b0 * (r1 - r0)
    scale = b0 * (abs(r1) + abs(r0))
    return SignValue(value, tol_sign * max(1.0, scale))


def _trace_entry(x, value, err, scale) -> dict:
    return {"x": float(x), "value": float(value), "bound": float(err), "scale": float(scale)}


def sampled_endpoint_limit(
    eval_fn,
    points,
    tol_sign: float,
    where: str = "endpoint",
) -> tuple[SignValue, list[dict]]:
    """Classify the limit of ``eval_fn`` along an increasing schedule.

    ``eval_fn(x) -> (value, hard_error, term_scale)``.  Divergence to
    +-inf is recognized from three consecutive samples beyond 1e12,
    growing in magnitude with a stable sign, and stops the schedule
    early.  Otherwise the last samples are Richardson-extrapolated
    (the schedule is geometric, so the leading error halves per step).

    Raises ``UndeterminedLimitError`` when the trace neither converges
    nor diverges cleanly.
    """
    trace: list[dict] = []
    vals: list[float] = []
    errs: list[float] = []
    scales: list[float] = []
    for x in points:
        try:
            v, e, s = eval_fn(x)
        except TruncationError:
            break
        v, e, s = float(v), float(e), float(s)
        if not math.isfinite(v):
            break
        trace.append(_trace_entry(x, v, e, s))
        vals.append(v)
        errs.append(e)
        scales.append(s)
        if len(vals) >= 3:
            w = vals[-3:]
            if (
                all(abs(u) > _INF_DETECT for u in w)
                and abs(w[0]) < abs(w[1]) < abs(w[2])
                and len({math.copysign(1, u) for u in w}) == 1
            ):
                sign = math.copysign(1, w[-1])
                return SignValue(sign * math.inf, 0.0), trace
    if len(vals) < 4:
        raise UndeterminedLimitError(
            f"endpoint schedule at {where} produced only {len(vals)} certifiable samples",
            trace,
        )
    extrap = 2 * vals[-1] - vals[-2]
    extrap_prev = 2 * vals[-2] - vals[-3]
    conv = abs(extrap - extrap_prev)
    base_tol = errs[-1] + tol_sign * max(1.0, scales[-1])
    tol = base_tol + 2.0 * conv
    near_zero = abs(extrap) <= tol and max(abs(v) for v in vals[-2:]) <= 8.0 * base_tol + 2.0 * conv
    if near_zero:
        return SignValue(extrap, tol), trace
    tail_signs = {math.copysign(1, v) for v in vals[-4:]}
    if len(tail_signs) == 1 and abs(extrap) > tol:
        return SignValue(extrap, tol), trace
    raise UndeterminedLimitError(
        f"endpoint sign trace at {where} does not stabilize "
        f"(extrapolate {extrap:.3g}, tolerance {tol:.3g})",
        trace,
    )


def finite_endpoint_schedule(radius: float, j_lo: int = 4, j_hi: int = 20) -> np.ndarray:
    return radius * (1.0 - 2.0 ** -np.arange(j_lo, j_hi + 1, dtype=float))


def infinite_endpoint_schedule(j_lo: int = 2, j_hi: int = 20) -> np.ndarray:
    return 2.0 ** np.arange(j_lo, j_hi + 1, dtype=float)


def effective_top(coeffs: np.ndarray, magnitudes: np.ndarray, rel_tol: float) -> int | None:
    """Index of the highest coefficient that is not a cancellation residue."""
    floor = rel_tol * np.max(magnitudes) if magnitudes.size else 0.0
    for k in range(len(coeffs) - 1, -1, -1):
        if abs(coeffs[k]) > max(rel_tol * magnitudes[k], floor * 1e-3):
            return k
    return None


def cross_difference(f: PowerSeries, g: PowerSeries) -> tuple[np.ndarray, np.ndarray]:
    """Slot coefficients of ``F'G - FG'`` and their formation magnitudes.

    H = (F'G - FG') / G', so for polynomial pairs this cross-difference
    carries all of H's sign structure.  The magnitude array lets callers
    treat coefficients that are pure cancellation residue as zero.
    """
    a, b = f.coeff_array(), g.coeff_array()
    ap, bp = derivative(f).coeff_array(), derivative(g).coeff_array()
    cross = np.convolve(ap, b) - np.convolve(a, bp)
    mags = np.convolve(np.abs(ap), np.abs(b)) + np.convolve(np.abs(a), np.abs(bp))
    return cross, mags


def polynomial_infinity_limit(
    f: PowerSeries, g: PowerSeries, tol_sign: float = 1e-8
) -> tuple[SignValue, list[dict]]:
    """Exact limit of H at +inf for a finite (polynomial) pair.

    H = (A'B - AB') / B'; the limit follows from the effective degree and
    leading sign of the cross-difference against those of B'.  Effective
    means: coefficients that are pure cancellation residue (tiny against
    the magnitude of the products forming them) count as zero.
    """
    if f.scheme is not g.scheme:
        raise ValueError("polynomial infinity limit needs matching index schemes")
    bp = derivative(g).coeff_array()
    # Slot convolutions represent products in the x**stride variable; a
    # common offset shift multiplies both sides of the ratio equally.
    cross, mags = cross_difference(f, g)
    top = effective_top(cross, mags, 64 * np.finfo(float).eps)
    trace = [{"cross_coeffs": cross.tolist(), "top": top}]
    if top is None:
        return SignValue(0.0, tol_sign), trace
    bp_top = effective_top(bp, np.abs(bp), 0.0)
    if bp_top is None:
        raise SingularPointError("denominator is constant; H is undefined for this pair")
    sign = math.copysign(1.0, cross[top])
    # Offsets shift numerator and denominator exponents identically except
    # for the derivative bookkeeping already baked into the slot algebra.
    num_deg = f.scheme.differentiated.exponent(0) + f.scheme.stride * top + g.scheme.offset
    den_deg = g.scheme.differentiated.exponent(bp_top)
    if num_deg > den_deg:
        return SignValue(sign * math.inf, 0.0), trace
    if num_deg == den_deg:
        val = cross[top] / bp[bp_top]
        return SignValue(val, tol_sign * max(1.0, abs(val))), trace
    return SignValue(0.0, tol_sign), trace


def h_endpoint_limit(
    f: PowerSeries,
    g: PowerSeries,
    tol_sign: float = 1e-8,
) -> tuple[SignValue, list[dict], str]:
    """Endpoint limit of H for a raw pair, choosing the sampling strategy.

    Finite radius: geometric schedule toward the endpoint.  Infinite
    domain: exact degree analysis for finite pairs, otherwise the
    geometric schedule ``x = 2^j`` (certified tail bounds permitting).
    Kernel-denominator pairs are handled by ``kernels.kernel_h_limit``.
    """
    if math.isfinite(f.radius):
        ev = HEvaluator(f, g)
        sv, trace = sampled_endpoint_limit(
            lambda x: ev(x, with_scale=True),
            finite_endpoint_schedule(g.radius),
            tol_sign,
            where=f"r = {g.radius:g}",
        )
        return sv, trace, "sampled-extrapolation"
    from .series import ZERO_TAIL  # the common polynomial-at-infinity case

    if f.tail is ZERO_TAIL and g.tail is ZERO_TAIL:
        sv, trace = polynomial_infinity_limit(f, g, tol_sign)
        return sv, trace, "kernel-closed-form"
    ev = HEvaluator(f, g)
    sv, trace = sampled_endpoint_limit(
        lambda x: ev(x, with_scale=True),
        infinite_endpoint_schedule(),
        tol_sign,
        where="infinity",
    )
    return sv, trace, "sampled-extrapolation"


@dataclass(frozen=True)
class IdentityReport:
    """Finite-difference residuals of the two defining identities of H."""

    points: tuple[float, ...]
    max_dev_ratio_rule: float  # (F/G)' vs (G'/G^2) H
    max_dev_h_rule: float      # H'    vs (F'/G')' G

    @property
    def max_deviation(self) -> float:
        return max(self.max_dev_ratio_rule, self.max_dev_h_rule)


def check_identities(
    f: PowerSeries, g: PowerSeries, xs, fd_step: float = 1e-5
) -> IdentityReport:
    """Compare central finite differences of F/G and H with the identities."""
    xs = np.asarray(xs, dtype=float)
    h = fd_step
    ev = HEvaluator(f, g)
    fp, gp = derivative(f), derivative(g)
    fpp, gpp = derivative(fp), derivative(gp)

    def ratio(x):
        fv, _ = evaluate(f, x)
        gv, _ = evaluate(g, x)
        return fv / gv

    gv, _ = evaluate(g, xs)
    gpv, _ = evaluate(gp, xs)
    hval, _ = ev(xs)
    fd_ratio = (ratio(xs + h) - ratio(xs - h)) / (2 * h)
    rhs1 = gpv / gv**2 * hval
    dev1 = np.abs(fd_ratio - rhs1) / np.maximum(1.0, np.maximum(np.abs(fd_ratio), np.abs(rhs1)))

    hp_fd = (ev(xs + h)[0] - ev(xs - h)[0]) / (2 * h)
    fpv, _ = evaluate(fp, xs)
    fppv, _ = evaluate(fpp, xs)
    gppv, _ = evaluate(gpp, xs)
    rhs2 = (fppv * gpv - fpv * gppv) / gpv**2 * gv
    dev2 = np.abs(hp_fd - rhs2) / np.maximum(1.0, np.maximum(np.abs(hp_fd), np.abs(rhs2)))

    return IdentityReport(
        points=tuple(float(x) for x in xs),
        max_dev_ratio_rule=float(np.max(dev1)),
        max_dev_h_rule=float(np.max(dev2)),
    )
