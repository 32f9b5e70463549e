"""Tunable tolerances and sizes shared across the pipeline."""

from __future__ import annotations

from dataclasses import dataclass, replace


@dataclass(frozen=True)
class AnalysisConfig:
    """Knobs for one classification run.

    * ``n_terms``: stored slots per series (tail bounds assume this many).
    * ``tol_sign``: relative band inside which an endpoint or scan value
      counts as zero; scaled by the magnitude of the terms entering it.
    * ``tol_const``: two consecutive ratios closer than this are equal.
    * ``tol_bisect_rel``: turning-point bracket width target, relative to
      the domain scale.
    * ``grid_size``: points for sign scans and empirical verification.
    * ``fd_step``: central finite-difference step for identity checks.
    """

    n_terms: int = 64
    tol_sign: float = 1e-8
    tol_const: float = 1e-12
    tol_bisect_rel: float = 1e-9
    grid_size: int = 4096
    fd_step: float = 1e-5

    def with_(self, **kw) -> "AnalysisConfig":
        return replace(self, **kw)


DEFAULT_CONFIG = AnalysisConfig()
