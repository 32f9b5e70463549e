"""Analysis pairs: a numerator/denominator series plus ratio-tail data.

A ``RatioPair`` is the unit the classifier works on.  Besides the two
series it records how the ratio sequence behaves beyond the stored
prefix (finite, eventually constant, or a geometric approach to a finite
limit) because every endpoint computation relies on it.

The central identity used throughout: for any constant L,
``H(A, B) == H(A - L*B, B)`` (adding a multiple of the denominator to
the numerator shifts the ratio by a constant and leaves H unchanged).
Choosing L as the ratio-tail limit turns the numerator into a deviation
series that is a polynomial (constant tail) or decays geometrically,
which is what makes sign certification near the right endpoint possible
at a fixed truncation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import HypothesisViolationError
from .kernels import KernelSpec, coeff_ratio_sup, kernel_ratio_multipliers, make_kernel
from .profile import Direction, RatioProfile, build_profile
from .series import GeometricTail, IndexScheme, PowerSeries, ZERO_TAIL, derivative, evaluate

__all__ = [
    "TailKind",
    "RatioTail",
    "RatioPair",
    "pair_from_kernel",
    "pair_from_ratio_sequence",
    "pair_from_polynomials",
]


class TailKind(str, Enum):
    FINITE = "finite"          # both series are polynomials; no ratios beyond
    CONSTANT = "constant"      # c_k equals the last stored ratio for all k > N
    GEOMETRIC = "geometric"    # |c_k - limit| decays geometrically toward limit


@dataclass(frozen=True)
class RatioTail:
    kind: TailKind
    limit: float = 0.0
    decay: float = 0.5

    def __post_init__(self):
        if self.kind is TailKind.GEOMETRIC and not (0.0 < self.decay < 1.0):
            raise ValueError(f"geometric ratio tail needs decay in (0, 1), got {self.decay}")

    def direction(self, last_ratio: float, tol: float) -> Direction:
        if self.kind is not TailKind.GEOMETRIC:
            return Direction.CONSTANT
        gap = self.limit - last_ratio
        if abs(gap) <= tol:
            return Direction.CONSTANT
        return Direction.INCREASING if gap > 0 else Direction.DECREASING


@dataclass(frozen=True)
class RatioPair:
    """Numerator/denominator pair ready for classification."""

    numerator: PowerSeries
    denominator: PowerSeries
    tail: RatioTail
    kernel: KernelSpec | None = None
    normalization: str | None = None

    @property
    def radius(self) -> float:
        return self.denominator.radius

    @property
    def ratios(self) -> np.ndarray:
        return self.numerator.coeff_array() / self.denominator.coeff_array()

    @property
    def tail_limit(self) -> float:
        """The constant L subtracted in the deviation reduction."""
        if self.tail.kind is TailKind.FINITE:
            return 0.0
        if self.tail.kind is TailKind.CONSTANT:
            return float(self.ratios[-1])
        return self.tail.limit

    def profile(self, tol_const: float) -> RatioProfile:
        direction = self.tail.direction(float(self.ratios[-1]), tol_const)
        return build_profile(self.numerator, self.denominator, tol_const, direction)

    def deviation(self) -> PowerSeries:
        """Numerator minus ``tail_limit`` times the denominator.

        H of (deviation, denominator) equals H of the original pair, and
        the deviation's tail is zero (finite/constant ratio tails) or a
        certified geometric decay.
        """
        lim = self.tail_limit
        coeffs = tuple(
            a - lim * b for a, b in zip(self.numerator.coeffs, self.denominator.coeffs)
        )
        if self.tail.kind is TailKind.GEOMETRIC:
            b_sup = (
                coeff_ratio_sup(self.kernel, self.numerator.n_terms - 1)
                if self.kernel is not None
                else _tail_ratio_sup(self.denominator)
            )
            tail: object = GeometricTail(self.tail.decay * b_sup)
        else:
            tail = ZERO_TAIL
        return PowerSeries(coeffs, self.numerator.radius, self.numerator.scheme, tail)

    def derivative_pair(self) -> "RatioPair":
        """The pair (A', B'); its ratio sequence is the index shift of ours."""
        return RatioPair(
            numerator=derivative(self.numerator),
            denominator=derivative(self.denominator),
            tail=self.tail,
            kernel=None,  # closed-form endpoint handling stays with the base pair
            normalization=self.normalization,
        )

    def ratio_values(self, x) -> np.ndarray:
        """A(x)/B(x) evaluated through the deviation split L + delta/B."""
        x = np.asarray(x, dtype=float)
        bval, _ = evaluate(self.denominator, x)
        dval, _ = evaluate(self.deviation(), x)
        return self.tail_limit + dval / bval


def _tail_ratio_sup(b: PowerSeries) -> float:
    if b.tail is ZERO_TAIL:
        return 1.0  # unused: a finite denominator forces a finite pair
    if isinstance(b.tail, GeometricTail):
        return b.tail.coeff_ratio
    raise ValueError("cannot bound the denominator's coefficient ratio beyond the prefix")


def _materialize_ratios(
    given: np.ndarray, tail: RatioTail, n_terms: int, tol: float
) -> np.ndarray:
    """Extend a ratio prefix to ``n_terms`` slots according to its tail."""
    c = np.asarray(given, dtype=float)
    if c.size >= n_terms:
        return c
    extra = n_terms - c.size
    if tail.kind is TailKind.CONSTANT:
        ext = np.full(extra, c[-1])
    elif tail.kind is TailKind.GEOMETRIC:
        gap = tail.limit - c[-1]
        if abs(gap) <= tol:
            ext = np.full(extra, tail.limit)
        else:
            ext = tail.limit - gap * tail.decay ** np.arange(1, extra + 1)
    else:  # FINITE ratios come padded already
        ext = np.zeros(extra)
    return np.concatenate([c, ext])


def pair_from_kernel(
    spec: KernelSpec,
    numerator_coeffs,
    n_terms: int,
    tail: RatioTail | None = None,
    tol_const: float = 1e-12,
) -> RatioPair:
    """Build a pair over a built-in kernel denominator.

    ``numerator_coeffs`` are slot coefficients in the kernel's index
    scheme.  For the log-family kernel the constant term is removed first
    (the denominator has none) and slots shift to start at x^1; the
    normalization is recorded on the pair.

    The ratio tail declaration is materialized out to ``n_terms`` slots so
    the stored prefix always reflects it.
    """
    coeffs = np.asarray(list(numerator_coeffs), dtype=float)
    note = None
    if spec.scheme is IndexScheme.SHIFTED:
        if coeffs.size < 2:
            raise HypothesisViolationError(
                "log-family analysis needs numerator terms beyond the constant"
            )
        if coeffs[0] != 0.0:
            note = f"constant numerator term {coeffs[0]!r} removed (denominator starts at x^1)"
        coeffs = coeffs[1:]
    if coeffs.size == 0:
        raise ValueError("numerator needs at least one coefficient")
    mult_prefix = kernel_ratio_multipliers(spec, coeffs.size)
    c_given = coeffs * mult_prefix
    if tail is None:
        # A finite numerator has ratio 0 beyond its degree: record the drop
        # to 0 in the stored prefix and continue constantly.
        tail = RatioTail(TailKind.CONSTANT)
        c_given = np.append(c_given, 0.0)
    return pair_from_ratio_sequence(spec, c_given, max(n_terms, c_given.size), tail, tol_const, note)


def pair_from_ratio_sequence(
    spec: KernelSpec,
    ratios,
    n_terms: int,
    tail: RatioTail,
    tol_const: float = 1e-12,
    normalization: str | None = None,
) -> RatioPair:
    """Build a kernel pair directly from a ratio-sequence prefix."""
    c = _materialize_ratios(np.asarray(list(ratios), dtype=float), tail, n_terms, tol_const)
    n_terms = c.size
    b = make_kernel(spec, n_terms)
    a_coeffs = c / kernel_ratio_multipliers(spec, n_terms)
    a = PowerSeries(tuple(a_coeffs), spec.radius, spec.scheme, _numerator_tail(spec, tail, n_terms))
    return RatioPair(a, b, tail, kernel=spec, normalization=normalization)


def _numerator_tail(spec: KernelSpec, tail: RatioTail, n_terms: int) -> object:
    """Tail descriptor for a kernel-instance numerator a_k = c_k * b_k."""
    b_sup = coeff_ratio_sup(spec, n_terms - 1)
    if tail.kind is TailKind.GEOMETRIC:
        lim, decay = abs(tail.limit), tail.decay
        # sup |c_{k+1}/c_k| over the tail: the deviation from the limit is
        # negligible at the stored depth, so the ratio is essentially 1;
        # keep an explicit safety factor.
        if lim > 1e-6:
            c_sup = (lim + decay) / max(lim - 1e-6, 1e-6) if lim < 1.0 else 1.0 + decay
            c_sup = max(c_sup, 1.0 + 1e-6)
        else:
            c_sup = max(decay, 1e-3)
        return GeometricTail(c_sup * b_sup)
    if tail.kind is TailKind.CONSTANT:
        return GeometricTail(b_sup)  # c constant: a-ratios equal b-ratios
    return ZERO_TAIL


def pair_from_polynomials(
    numerator_coeffs,
    denominator_coeffs,
    radius: float,
) -> RatioPair:
    """Build a finite (polynomial) pair on (0, radius); radius may be inf.

    The numerator is zero padded to the denominator's length; a longer
    numerator would divide by vanishing denominator coefficients and is
    rejected as a hypothesis violation.
    """
    a = np.asarray(list(numerator_coeffs), dtype=float)
    b = np.asarray(list(denominator_coeffs), dtype=float)
    if a.size > b.size:
        raise HypothesisViolationError(
            f"denominator hypothesis b_k > 0 fails at k = {b.size}: numerator degree exceeds "
            "denominator degree in a finite pair",
            index=b.size,
        )
    if a.size < b.size:
        a = np.concatenate([a, np.zeros(b.size - a.size)])
    num = PowerSeries(tuple(a), radius, IndexScheme.GENERAL, ZERO_TAIL)
    den = PowerSeries(tuple(b), radius, IndexScheme.GENERAL, ZERO_TAIL)
    return RatioPair(num, den, RatioTail(TailKind.FINITE))
