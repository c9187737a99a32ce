import dataclasses
import logging
import math
import os
from typing import Callable, Optional

import numpy as np
from scipy.optimize import brentq

logger = logging.getLogger(__name__)


class ClampedTonesError(Exception):
    """Base exception for clampedtones modules."""


class DomainError(ClampedTonesError, ValueError):
    """Exception for arguments outside the domain of an operation, e.g., caps larger than the sphere."""


class ConvergenceError(ClampedTonesError):
    """Exception for series that do not converge or root finders that cannot bracket a root."""


class PoleProximityError(ConvergenceError):
    """Exception for evaluations too close to a zero of the oscillating hypergeometric branch."""


class NullspaceError(ConvergenceError):
    """Exception for boundary matrices whose nullspace is not one-dimensional."""


THREADS_ENVIRONMENT_VARIABLE = 'CLAMPED_TONES_THREADS'


@dataclasses.dataclass(frozen=True)
class SeriesConfig:
    """
    Termination settings for all hypergeometric series.

    rel_tol: A series stops after three consecutive terms smaller than rel_tol times the partial sum.
    max_terms: Hard limit on the number of terms. Hitting it raises ConvergenceError.
    series_limit: Arguments t above this value are evaluated by analytic continuation with mpmath
                  by callers that may approach t = 1.
    """

    rel_tol: float = 1e-14
    max_terms: int = 20000
    series_limit: float = 0.9

    def __post_init__(self):
        if not 0 < self.rel_tol <= 1e-6:
            raise DomainError(f"Relative series tolerance must be in (0, 1e-6] but got {self.rel_tol}!")
        if int(self.max_terms) != self.max_terms or self.max_terms < 64:
            raise DomainError(f"Maximum series length must be an integer >= 64 but got {self.max_terms}!")
        if not 0 < self.series_limit < 1:
            raise DomainError(f"Series limit must be in (0, 1) but got {self.series_limit}!")


DEFAULT_SERIES_CONFIG = SeriesConfig()


def available_cores() -> int:
    count = len(os.sched_getaffinity(0)) if hasattr(os, 'sched_getaffinity') else os.cpu_count()
    return max(1, count or 1)


def worker_count(requested: Optional[int] = None) -> int:
    """
    Returns the number of worker processes to use: the requested count or all available cores,
    capped by the CLAMPED_TONES_THREADS environment variable if it is set.
    """
    count = available_cores() if not requested else int(requested)
    cap = os.environ.get(THREADS_ENVIRONMENT_VARIABLE, '').strip()
    if cap:
        if not cap.isdigit() or int(cap) < 1:
            raise DomainError(f"{THREADS_ENVIRONMENT_VARIABLE} must be a positive integer but got '{cap}'!")
        count = min(count, int(cap))
    return max(1, count)


def sign_changes(values) -> list[int]:
    """
    Returns all indexes i such that values[i] and values[j] have opposite signs, where j > i is the next
    index with a nonzero finite value. Zeros and non-finite values are skipped.
    """
    result = []
    lastIndex = None
    for i, value in enumerate(values):
        if not math.isfinite(value) or value == 0:
            continue
        if lastIndex is not None and (value > 0) != (values[lastIndex] > 0):
            result.append(lastIndex)
        lastIndex = i
    return result


def next_nonzero(values, index: int) -> int:
    for i in range(index + 1, len(values)):
        if math.isfinite(values[i]) and values[i] != 0:
            return i
    raise IndexError(f"No nonzero value after index {index}!")


def bracketed_root(
    function: Callable[[float], float],
    lower: float,
    upper: float,
    what: str = 'root',
    rtol: float = 1e-14,
    xtol: Optional[float] = None,
) -> float:
    """
    Refines a sign change of function on [lower, upper] with Brent's method. Raises ConvergenceError
    naming the bracket if there is no sign change or the iteration does not converge.
    """
    lowerValue = function(lower)
    upperValue = function(upper)
    if lowerValue == 0:
        return lower
    if upperValue == 0:
        return upper
    if not (math.isfinite(lowerValue) and math.isfinite(upperValue)) or (lowerValue > 0) == (upperValue > 0):
        raise ConvergenceError(
            f"No sign change for {what} on the bracket [{lower!r}, {upper!r}] "
            f"(values {lowerValue!r}, {upperValue!r})!"
        )

    if xtol is None:
        xtol = max(abs(lower), abs(upper)) * 1e-15 or 1e-300
    try:
        root, result = brentq(
            function, lower, upper, xtol=xtol, rtol=max(rtol, 4 * np.finfo(float).eps), maxiter=200, full_output=True
        )
    except (ValueError, RuntimeError) as exception:
        raise ConvergenceError(
            f"Failed to refine {what} on the bracket [{lower!r}, {upper!r}]: {exception}"
        ) from exception
    if not result.converged:
        raise ConvergenceError(f"Brent iteration for {what} on the bracket [{lower!r}, {upper!r}] did not converge!")
    logger.debug("Refined %s on [%s, %s] in %d iterations: %s", what, lower, upper, result.iterations, root)
    return float(root)
