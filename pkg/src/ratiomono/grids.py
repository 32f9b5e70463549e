"""Composite evaluation grids: uniform interior plus geometric approaches.

Turning points and sign witnesses can sit anywhere in (0, r), including
very close to either end, so scan grids combine a uniform interior mesh
with geometric refinements toward 0 and (for finite domains) toward the
right endpoint.  Points never touch the endpoints; finite domains are
capped at ``r * (1 - 2^-20)`` which keeps evaluation strictly inside the
open interval.
"""

from __future__ import annotations

import numpy as np

_GEO_DEPTH = 20  # 2^-20 ~ 1e-6: the cap on how close grids approach an endpoint


def composite_grid(hi: float, size: int, finite_endpoint: bool) -> np.ndarray:
    """Sorted, deduplicated grid of about ``size`` points in (0, hi]."""
    if size < 2:
        raise ValueError(f"grid size must be at least 2, got {size}")
    toward_zero = hi * 2.0 ** -np.arange(2, _GEO_DEPTH + 1, dtype=float)
    parts = [toward_zero]
    if finite_endpoint:
        parts.append(hi * (1.0 - 2.0 ** -np.arange(2, _GEO_DEPTH + 1, dtype=float)))
        top = hi * (1.0 - 2.0 ** -float(_GEO_DEPTH))
    else:
        top = hi
    n_uniform = max(size - sum(len(p) for p in parts), 2)
    parts.append(np.linspace(0.0, top, n_uniform + 1)[1:])
    grid = np.unique(np.concatenate(parts))
    return grid[(grid > 0.0) & (grid <= top)]
