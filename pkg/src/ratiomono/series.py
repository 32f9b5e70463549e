"""Truncated real power series with explicit tail control.

A series is stored as a finite slot vector ``c_0..c_N`` together with an
index scheme mapping slots to exponents (plain series, odd/even series
whose slots step by two, and series starting at x^1), a convergence
radius, and a tail descriptor.  The tail descriptor is what makes
evaluation honest: every evaluation returns the partial sum *and* a
bound on the omitted tail, or refuses when no bound can be established.

Tail descriptors:

* ``ZERO_TAIL`` -- the series is exactly the stored polynomial.
* ``GeometricTail(coeff_ratio)`` -- a certified bound
  ``|c_{k+1}/c_k| <= coeff_ratio`` for every slot at or beyond the last
  stored one, giving a geometric majorant for the omitted terms.
* closed-form tails attached by the kernel module, which evaluate the
  underlying function exactly and carry only a rounding-level bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Protocol, runtime_checkable

import numpy as np

from .errors import DomainError, TruncationError

__all__ = [
    "IndexScheme",
    "PowerSeries",
    "ZERO_TAIL",
    "GeometricTail",
    "derivative",
    "evaluate",
    "coeffs_from_derivatives",
    "pochhammer",
]

_EPS = float(np.finfo(float).eps)


class IndexScheme(Enum):
    """Slot-to-exponent maps: ``exponent(k) = offset + stride * k``."""

    GENERAL = (0, 1)
    ODD = (1, 2)
    EVEN = (0, 2)
    SHIFTED = (1, 1)

    @property
    def offset(self) -> int:
        return self.value[0]

    @property
    def stride(self) -> int:
        return self.value[1]

    def exponent(self, slot: int) -> int:
        return self.offset + self.stride * slot

    def exponents(self, n: int) -> np.ndarray:
        return self.offset + self.stride * np.arange(n)

    @property
    def differentiated(self) -> "IndexScheme":
        return _DERIVED_SCHEME[self]


_DERIVED_SCHEME = {
    IndexScheme.GENERAL: IndexScheme.GENERAL,
    IndexScheme.ODD: IndexScheme.EVEN,
    IndexScheme.EVEN: IndexScheme.ODD,
    IndexScheme.SHIFTED: IndexScheme.GENERAL,
}


@runtime_checkable
class Tail(Protocol):
    """Interface every tail descriptor implements."""

    def bound(self, series: "PowerSeries", x: np.ndarray) -> np.ndarray:
        """Upper bound on the omitted tail magnitude at each x, or raise."""
        ...

    def differentiated(self, series: "PowerSeries", new_series: "PowerSeries") -> "Tail":
        """Tail descriptor valid for the termwise derivative."""
        ...


class _ZeroTail:
    """Finite polynomial: nothing beyond the stored slots."""

    def bound(self, series: "PowerSeries", x: np.ndarray) -> np.ndarray:
        return np.zeros_like(np.asarray(x, dtype=float))

    def differentiated(self, series, new_series):
        return self

    def __repr__(self):
        return "ZERO_TAIL"


ZERO_TAIL = _ZeroTail()


@dataclass(frozen=True)
class GeometricTail:
    """Certified ``|c_{k+1}/c_k| <= coeff_ratio`` for slots >= last stored.

    The omitted terms are then majorized by the geometric series anchored
    at the last stored term, provided ``coeff_ratio * x**stride < 1``.
    """

    coeff_ratio: float

    def __post_init__(self):
        if not (self.coeff_ratio >= 0.0 and math.isfinite(self.coeff_ratio)):
            raise ValueError(f"coefficient ratio bound must be finite and >= 0, got {self.coeff_ratio}")

    def bound(self, series: "PowerSeries", x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        s = series.scheme
        q = self.coeff_ratio * x ** s.stride
        if np.any(q >= 1.0):
            worst = float(np.max(x))
            raise TruncationError(
                f"geometric tail bound not established: ratio*x^stride = "
                f"{self.coeff_ratio} * {worst}^{s.stride} >= 1"
            )
        last = len(series.coeffs) - 1
        anchor = abs(series.coeffs[last]) * x ** s.exponent(last)
        return anchor * q / (1.0 - q)

    def differentiated(self, series, new_series):
        # Termwise differentiation multiplies tail coefficient ratios by
        # exponent ratios e(k+1)/e(k) <= (E+s)/E, E = first omitted exponent.
        s = new_series.scheme
        first_omitted = s.exponent(len(new_series.coeffs))
        factor = (first_omitted + s.stride) / max(first_omitted, 1)
        return GeometricTail(self.coeff_ratio * factor)


@dataclass(frozen=True)
class PowerSeries:
    """Immutable truncated power series.

    ``coeffs[k]`` is the coefficient of ``x**scheme.exponent(k)``.
    """

    coeffs: tuple[float, ...]
    radius: float
    scheme: IndexScheme = IndexScheme.GENERAL
    tail: Tail = ZERO_TAIL

    def __post_init__(self):
        if len(self.coeffs) < 1:
            raise ValueError("a power series needs at least one stored coefficient")
        if not self.radius > 0:
            raise ValueError(f"convergence radius must be positive, got {self.radius}")
        object.__setattr__(self, "coeffs", tuple(float(c) for c in self.coeffs))

    @property
    def n_terms(self) -> int:
        return len(self.coeffs)

    def coeff_array(self) -> np.ndarray:
        return np.asarray(self.coeffs, dtype=float)


def derivative(s: PowerSeries) -> PowerSeries:
    """Termwise derivative, preserving the radius and flipping odd/even slots."""
    c = s.coeffs
    sch = s.scheme
    if sch is IndexScheme.GENERAL:
        new = tuple((k + 1) * c[k + 1] for k in range(len(c) - 1)) or (0.0,)
    elif sch is IndexScheme.SHIFTED:
        new = tuple((k + 1) * c[k] for k in range(len(c)))
    elif sch is IndexScheme.ODD:
        new = tuple((2 * k + 1) * c[k] for k in range(len(c)))
    else:  # EVEN
        new = tuple((2 * k + 2) * c[k + 1] for k in range(len(c) - 1)) or (0.0,)
    out = PowerSeries(new, s.radius, sch.differentiated, ZERO_TAIL)
    return PowerSeries(new, s.radius, sch.differentiated, s.tail.differentiated(s, out))


def _validate_points(x: np.ndarray, radius: float) -> None:
    if np.any(x <= 0.0) or np.any(x >= radius) or not np.all(np.isfinite(x)):
        bad = x if x.ndim == 0 else x[(x <= 0.0) | ~np.isfinite(x) | (x >= radius)][:1]
        raise DomainError(f"evaluation point {float(np.ravel(bad)[0])} outside (0, {radius})")


def evaluate(s: PowerSeries, x) -> tuple:
    """Evaluate the series at ``x`` (scalar or array) inside (0, radius).

    Returns ``(value, bound)`` where ``bound`` dominates the omitted tail
    plus rounding noise of the partial summation.

    Raises ``DomainError`` outside the open interval and ``TruncationError``
    when the tail descriptor cannot certify a bound at ``x``.
    """
    arr = np.asarray(x, dtype=float)
    scalar = arr.ndim == 0
    pts = np.atleast_1d(arr)
    _validate_points(pts, s.radius)

    closed = getattr(s.tail, "closed_value", None)
    if closed is not None:
        val = closed(pts)
        bnd = 8.0 * _EPS * np.abs(val) + 1e-300
    else:
        powers = pts ** s.scheme.offset if s.scheme.offset else np.ones_like(pts)
        val = powers * np.polynomial.polynomial.polyval(pts ** s.scheme.stride, s.coeff_array())
        tailb = s.tail.bound(s, pts)
        # Rounding of an n-term Horner sum: ~n*eps times the magnitude scale.
        mag = powers * np.polynomial.polynomial.polyval(
            pts ** s.scheme.stride, np.abs(s.coeff_array())
        )
        bnd = tailb + 2.0 * len(s.coeffs) * _EPS * mag
    if scalar:
        return float(val[0]), float(bnd[0])
    return val, bnd


def coeffs_from_derivatives(values, radius: float = math.inf) -> PowerSeries:
    """Series whose k-th coefficient is ``values[k] / k!`` (derivatives at 0)."""
    vals = list(values)
    if not vals:
        raise ValueError("derivative-values list must be nonempty")
    coeffs = tuple(v / math.factorial(k) for k, v in enumerate(vals))
    return PowerSeries(coeffs, radius, IndexScheme.GENERAL, ZERO_TAIL)


def pochhammer(d: float, k: int) -> float:
    """Rising factorial ``(d)_k = d (d+1) ... (d+k-1)``, with ``(d)_0 = 1``."""
    out = 1.0
    for i in range(k):
        out *= d + i
    return out
