"""Built-in denominator families with exact coefficients and closed forms.

Six families are supported, each with its slot coefficients, convergence
radius, index scheme, closed-form evaluation (used for exact values near
endpoints, where truncated summation cannot be certified), and the
normalized coefficient-ratio multipliers that turn numerator slots into
the ratio sequence ``a_k / b_k``.

Families (``d > 0`` where present):

=============  ==========================  ========  ============
kind           function                    radius    slots
=============  ==========================  ========  ============
exp            e^x                         inf       x^k / k!
recip_pow(d)   (1-x)^(-d)                  1         (d)_k/k! x^k
geometric      1/(1-x)  (= recip_pow(1))   1         x^k
neglog(d)      -ln(1-dx)                   1/d       d^k/k x^k, k >= 1
sinh(d)        sinh(dx)                    inf       odd slots
cosh(d)        cosh(dx)                    inf       even slots
=============  ==========================  ========  ============

The log family starts at x^1 (it has no constant term), so its slots use
the shifted index scheme and numerators are analyzed with their constant
term removed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import HypothesisViolationError
from .series import (
    GeometricTail,
    IndexScheme,
    PowerSeries,
    ZERO_TAIL,
    pochhammer,
)

__all__ = [
    "KernelKind",
    "KernelSpec",
    "make_kernel",
    "kernel_ratio_sequence",
    "kernel_ratio_multipliers",
    "h_factor",
    "kernel_h_expression",
    "kernel_h_limit",
    "kernel_closed_value",
    "coeff_ratio_sup",
    "KERNEL_TABLE",
]


class KernelKind(str, Enum):
    EXP = "exp"
    RECIP_POW = "recip_pow"
    GEOMETRIC = "geometric"
    NEGLOG = "neglog"
    SINH = "sinh"
    COSH = "cosh"


_PARAMETRIC = {KernelKind.RECIP_POW, KernelKind.NEGLOG, KernelKind.SINH, KernelKind.COSH}


@dataclass(frozen=True)
class KernelSpec:
    """A kernel family plus its parameter (where the family takes one)."""

    kind: KernelKind
    d: float | None = None

    def __post_init__(self):
        kind = KernelKind(self.kind)
        object.__setattr__(self, "kind", kind)
        if kind in _PARAMETRIC:
            if self.d is None or not (self.d > 0) or not math.isfinite(self.d):
                raise ValueError(f"kernel {kind.value} requires a finite parameter d > 0, got {self.d}")
        elif self.d is not None:
            raise ValueError(f"kernel {kind.value} takes no parameter d")

    @property
    def param(self) -> float:
        """Effective parameter: 1.0 for the parameter-free families."""
        return 1.0 if self.d is None else float(self.d)

    @property
    def radius(self) -> float:
        kind = self.kind
        if kind in (KernelKind.EXP, KernelKind.SINH, KernelKind.COSH):
            return math.inf
        if kind in (KernelKind.RECIP_POW, KernelKind.GEOMETRIC):
            return 1.0
        return 1.0 / self.param  # neglog

    @property
    def scheme(self) -> IndexScheme:
        return {
            KernelKind.SINH: IndexScheme.ODD,
            KernelKind.COSH: IndexScheme.EVEN,
            KernelKind.NEGLOG: IndexScheme.SHIFTED,
        }.get(self.kind, IndexScheme.GENERAL)

    def label(self) -> str:
        if self.d is None:
            return self.kind.value
        return f"{self.kind.value}(d={self.d:g})"


def _slot_coeff(spec: KernelSpec, k: int) -> float:
    """Coefficient stored in slot k (exponent spec.scheme.exponent(k))."""
    kind, d = spec.kind, spec.param
    if kind is KernelKind.EXP:
        return 1.0 / math.factorial(k)
    if kind is KernelKind.RECIP_POW:
        return pochhammer(d, k) / math.factorial(k)
    if kind is KernelKind.GEOMETRIC:
        return 1.0
    if kind is KernelKind.NEGLOG:  # slot k holds x^{k+1}
        return d ** (k + 1) / (k + 1)
    if kind is KernelKind.SINH:
        return d ** (2 * k + 1) / math.factorial(2 * k + 1)
    return d ** (2 * k) / math.factorial(2 * k)  # cosh


def coeff_ratio_sup(spec: KernelSpec, last_slot: int) -> float:
    """Certified sup over slots k >= last_slot of ``b_{k+1} / b_k``."""
    kind, d, n = spec.kind, spec.param, last_slot
    if kind is KernelKind.EXP:
        return 1.0 / (n + 1)
    if kind is KernelKind.RECIP_POW:
        # (d+k)/(k+1): decreasing to 1 when d > 1, increasing to 1 when d < 1.
        return max((d + n) / (n + 1), 1.0)
    if kind is KernelKind.GEOMETRIC:
        return 1.0
    if kind is KernelKind.NEGLOG:
        return d  # d*(k+1)/(k+2) < d
    if kind is KernelKind.SINH:
        return d * d / ((2 * n + 2) * (2 * n + 3))
    return d * d / ((2 * n + 1) * (2 * n + 2))  # cosh


class _KernelTail:
    """Closed-form tail: evaluates the kernel (or a derivative) exactly."""

    def __init__(self, spec: KernelSpec, order: int = 0):
        self.spec = spec
        self.order = order

    def closed_value(self, x: np.ndarray) -> np.ndarray:
        return kernel_closed_value(self.spec, self.order, x)

    def bound(self, series, x):
        return np.zeros_like(np.asarray(x, dtype=float))

    def differentiated(self, series, new_series):
        return _KernelTail(self.spec, self.order + 1)

    def __repr__(self):
        return f"KernelTail({self.spec.label()}, order={self.order})"


def kernel_closed_value(spec: KernelSpec, order: int, x) -> np.ndarray:
    """Exact value of the kernel's order-th derivative at x."""
    x = np.asarray(x, dtype=float)
    kind, d = spec.kind, spec.param
    if kind is KernelKind.EXP:
        return np.exp(x)
    if kind is KernelKind.RECIP_POW:
        return pochhammer(d, order) * (1.0 - x) ** (-(d + order))
    if kind is KernelKind.GEOMETRIC:
        return math.factorial(order) * (1.0 - x) ** (-(1 + order))
    if kind is KernelKind.NEGLOG:
        if order == 0:
            return -np.log1p(-d * x)
        return d ** order * math.factorial(order - 1) * (1.0 - d * x) ** (-order)
    if kind is KernelKind.SINH:
        f = np.sinh if order % 2 == 0 else np.cosh
        return d ** order * f(d * x)
    f = np.cosh if order % 2 == 0 else np.sinh  # cosh
    return d ** order * f(d * x)


def make_kernel(spec: KernelSpec, n_terms: int) -> PowerSeries:
    """Build the kernel's series with n_terms stored slots."""
    if n_terms < 2:
        raise ValueError(f"a kernel needs at least 2 stored slots, got {n_terms}")
    coeffs = tuple(_slot_coeff(spec, k) for k in range(n_terms))
    return PowerSeries(coeffs, spec.radius, spec.scheme, _KernelTail(spec, 0))


def kernel_ratio_multipliers(spec: KernelSpec, n_terms: int) -> np.ndarray:
    """Per-slot factors m_k with ``c_k = m_k * a_k`` (i.e. m_k = 1/b_k)."""
    return 1.0 / np.array([_slot_coeff(spec, k) for k in range(n_terms)])


def kernel_ratio_sequence(spec: KernelSpec, a: PowerSeries) -> np.ndarray:
    """Normalized ratio sequence ``a_k / b_k`` for a numerator over this kernel.

    Raises ``HypothesisViolationError`` when the numerator's index scheme
    does not match the kernel's (e.g. even slots against sinh).
    """
    if a.scheme is not spec.scheme:
        raise HypothesisViolationError(
            f"numerator index scheme {a.scheme.name} does not match kernel "
            f"{spec.label()} ({spec.scheme.name})"
        )
    return a.coeff_array() * kernel_ratio_multipliers(spec, a.n_terms)


def h_factor(spec: KernelSpec, which: str, x) -> np.ndarray:
    """Multiplier of the derivative term in the closed-form H expression.

    H of (A, B) over a kernel denominator reduces to ``A' * factor - A``
    because B'/B (or B''/B' for the derivative pair) has an elementary
    closed form.  The factors:

    =============  =================  ==================
    kind           base pair          derivative pair
    =============  =================  ==================
    exp            1                  1
    recip_pow      (1-x)/d            (1-x)/(d+1)
    geometric      1-x                (1-x)/2
    neglog         -(1-dx)ln(1-dx)/d  (1-dx)/d
    sinh           tanh(dx)/d         coth(dx)/d
    cosh           coth(dx)/d         tanh(dx)/d
    =============  =================  ==================
    """
    if which not in ("base", "derivative"):
        raise ValueError(f"which must be 'base' or 'derivative', got {which!r}")
    x = np.asarray(x, dtype=float)
    kind, d = spec.kind, spec.param
    base = which == "base"
    if kind is KernelKind.EXP:
        return np.ones_like(x)
    if kind in (KernelKind.RECIP_POW, KernelKind.GEOMETRIC):
        return (1.0 - x) / (d if base else d + 1.0)
    if kind is KernelKind.NEGLOG:
        if base:
            return -(1.0 - d * x) * np.log1p(-d * x) / d
        return (1.0 - d * x) / d
    if kind is KernelKind.SINH:
        return (np.tanh(d * x) if base else 1.0 / np.tanh(d * x)) / d
    return ((1.0 / np.tanh(d * x)) if base else np.tanh(d * x)) / d  # cosh


def kernel_h_expression(spec: KernelSpec, num, num_d1, num_d2, which: str, x) -> np.ndarray:
    """Closed-form H at interior points x: ``A' * h_factor - A``.

    ``num``, ``num_d1``, ``num_d2`` are callables returning the numerator
    and its first two derivatives; ``which`` selects the base pair
    (H of (A, B)) or the derivative pair (H of (A', B')).  Only numerator
    values and elementary kernel closed forms enter, never a truncated
    kernel sum.
    """
    x = np.asarray(x, dtype=float)
    base = which == "base"
    f = num if base else num_d1
    fp = num_d1 if base else num_d2
    return fp(x) * h_factor(spec, which, x) - f(x)


def kernel_h_limit(
    spec: KernelSpec,
    deviation: PowerSeries,
    which: str = "base",
    tail_direction=None,
    tol_sign: float = 1e-8,
):
    """Endpoint limit of H for a kernel pair, from its deviation series.

    ``deviation`` is the numerator minus (ratio-tail limit) * kernel, so
    its slot coefficients vanish (or decay geometrically) beyond the
    stored prefix; H is unchanged by that subtraction.

    Finite-radius families evaluate the closed-form expression along the
    geometric endpoint schedule and extrapolate.  Infinite-domain families
    get their sign structurally: the deviation ratios ``delta_k`` are
    eventually one-signed, and the highest effective one dominates, giving
    ``-sign(delta_top) * inf`` -- equivalently ``+inf`` for a ratio tail
    that climbs to its limit and ``-inf`` for one that falls.

    Returns ``(SignValue, trace, method)`` with method
    "kernel-closed-form".
    """
    from .hfunc import SignValue, finite_endpoint_schedule, sampled_endpoint_limit
    from .profile import Direction
    from .series import derivative, evaluate

    if tail_direction is None:
        tail_direction = Direction.CONSTANT
    method = "kernel-closed-form"
    if math.isinf(spec.radius):
        delta = deviation.coeff_array() * kernel_ratio_multipliers(spec, deviation.n_terms)
        if which == "derivative":
            delta = delta[1:]
        trace = [{"analysis": "tail-dominance", "which": which}]
        if tail_direction is not Direction.CONSTANT:
            sign = float(tail_direction.sign)
            trace[0]["from"] = "declared ratio-tail direction"
            return SignValue(sign * math.inf, 0.0), trace, method
        floor = tol_sign * max(1.0, float(np.max(np.abs(delta), initial=0.0)))
        top = None
        for k in range(len(delta) - 1, -1, -1):
            if abs(delta[k]) > floor:
                top = k
                break
        trace[0]["top_index"] = top
        if top is None:
            return SignValue(0.0, floor), trace, method
        trace[0]["delta_top"] = float(delta[top])
        return SignValue(-math.copysign(math.inf, delta[top]), 0.0), trace, method

    d0 = deviation
    d1 = derivative(d0)
    d2 = derivative(d1)
    f_series, fp_series = (d0, d1) if which == "base" else (d1, d2)

    def eval_expr(x):
        xv = np.atleast_1d(np.asarray(x, dtype=float))
        fac = h_factor(spec, which, xv)
        fv, fe = evaluate(f_series, xv)
        fpv, fpe = evaluate(fp_series, xv)
        val = fpv * fac - fv
        err = fpe * np.abs(fac) + fe
        scale = np.abs(fpv * fac) + np.abs(fv)
        return float(val[0]), float(err[0]), float(scale[0])

    sv, trace = sampled_endpoint_limit(
        eval_expr,
        finite_endpoint_schedule(spec.radius),
        tol_sign,
        where=f"r = {spec.radius:g} ({spec.label()})",
    )
    return sv, trace, method


#: family -> (radius description, slot description) for the CLI listing.
KERNEL_TABLE = {
    "exp": ("(0, inf)", "e^x; ratio sequence k! a_k"),
    "recip_pow": ("(0, 1)", "(1-x)^(-d); ratio sequence k! a_k / (d)_k"),
    "geometric": ("(0, 1)", "1/(1-x); ratio sequence a_k"),
    "neglog": ("(0, 1/d)", "-ln(1-dx); slots k>=1, ratio sequence k a_k / d^k"),
    "sinh": ("(0, inf)", "sinh(dx); odd slots, ratio sequence (2k+1)! a_k / d^(2k+1)"),
    "cosh": ("(0, inf)", "cosh(dx); even slots, ratio sequence (2k)! a_k / d^(2k)"),
}
