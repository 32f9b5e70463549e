"""Exception hierarchy for the analysis pipeline.

Every failure mode that corresponds to a violated rule hypothesis or an
uncertifiable numeric step gets its own class, so callers (and the CLI
exit-code mapping) can distinguish "your input breaks the assumptions"
from "the numerics could not decide".
"""

from __future__ import annotations


class RatioMonoError(Exception):
    """Base class for all library errors."""


class HypothesisViolationError(RatioMonoError):
    """Input violates a rule hypothesis (e.g. a denominator coefficient <= 0)."""

    def __init__(self, message: str, index: int | None = None):
        super().__init__(message)
        self.index = index


class DomainError(RatioMonoError):
    """Evaluation point outside the open interval (0, radius)."""


class TruncationError(RatioMonoError):
    """No rigorous tail bound is available at the requested point."""


class InsufficientDataError(RatioMonoError):
    """Stored coefficient prefix too short to support the requested analysis."""


class SingularPointError(RatioMonoError):
    """Denominator derivative vanishes where the H-function is needed."""


class UndeterminedLimitError(RatioMonoError):
    """Endpoint sign trace did not converge to a certifiable sign."""

    def __init__(self, message: str, trace: list | None = None):
        super().__init__(message)
        self.trace = trace or []


class ClassificationIncompleteError(RatioMonoError):
    """Classification aborted; carries whatever evidence was gathered."""

    def __init__(self, message: str, evidence: dict | None = None):
        super().__init__(message)
        self.evidence = evidence or {}


class AmbiguousClassificationError(RatioMonoError):
    """Tolerance ties left more than one (or no) matching condition row."""

    def __init__(self, message: str, candidates: list[int] | None = None):
        super().__init__(message)
        self.candidates = candidates or []


class LocalizationFailureError(RatioMonoError):
    """Expected sign alternations of H not found at maximum grid refinement."""

    def __init__(self, message: str, trace: list | None = None):
        super().__init__(message)
        self.trace = trace or []
