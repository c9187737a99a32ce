"""
Special functions used by the tone solvers.

Gamma, Digamma and the Bessel family are thin validated wrappers around scipy.special.
The Gaussian hypergeometric functions are evaluated with a real-coefficient power series because all
parameter pairs used here have a real sum a + b and a real product a * b even when a and b themselves
are complex conjugates. Arguments close to 1 are handed to mpmath, which implements the analytic
continuation.
"""

import dataclasses
import logging
import math
from typing import Union

import mpmath
import numpy as np
import scipy.special

from .utils import (
    DEFAULT_SERIES_CONFIG,
    ConvergenceError,
    DomainError,
    SeriesConfig,
    bracketed_root,
    next_nonzero,
    sign_changes,
)

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]

EULER_GAMMA = float(np.euler_gamma)

# Grid resolution for locating sign changes of Bessel functions and their cross-products.
_ZERO_SCAN_STEP = 0.05
_ZERO_SCAN_END = 50.0


@dataclasses.dataclass(frozen=True)
class HypParams:
    """
    Parameters of F(1/2 - Lambda, 1/2 + Lambda; c; t). Only Lambda^2 is stored, so that a purely imaginary
    Lambda is encoded by a negative lambda_sq and all series coefficients stay real.
    """

    lambda_sq: float
    c: float

    def __post_init__(self):
        if not math.isfinite(self.lambda_sq):
            raise DomainError(f"Lambda^2 must be finite but got {self.lambda_sq}!")
        if not self.c > 0:
            raise DomainError(f"Third hypergeometric parameter must be positive but got {self.c}!")

    @property
    def a_times_b(self) -> float:
        return 0.25 - self.lambda_sq


def _as_result(value: np.ndarray, scalar: bool) -> ArrayLike:
    return float(value) if scalar else value


def gamma_real(x: float) -> float:
    if x <= 0 and x == round(x):
        raise DomainError(f"Gamma function has a pole at {x}!")
    return float(scipy.special.gamma(x))


def digamma_real(x: float) -> float:
    if not x > 0:
        raise DomainError(f"Digamma is only evaluated for positive arguments, got {x}!")
    return float(scipy.special.psi(x))


def digamma_any(x: float) -> float:
    """Digamma on the whole real axis without its poles, i.e., with reflection for negative arguments."""
    if x <= 0 and x == round(x):
        raise DomainError(f"Digamma function has a pole at {x}!")
    return float(scipy.special.psi(x))


def digamma_line(x: float, y: float) -> tuple[float, float]:
    """Returns real and imaginary part of Psi(x + iy) for x >= 1/2."""
    if not x >= 0.5:
        raise DomainError(f"Digamma on a line requires x >= 1/2 but got {x}!")
    value = complex(scipy.special.psi(complex(x, y)))
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise ConvergenceError(f"Digamma overflowed at {x} + {y}i!")
    return value.real, value.imag


def digamma_pair(z_sq: ArrayLike, shift: ArrayLike) -> ArrayLike:
    """
    Psi(shift + z) + Psi(shift - z) for real z^2. For negative z^2, z is purely imaginary and the sum
    becomes 2 Re Psi(shift + i|z|).
    """
    scalar = np.ndim(z_sq) == 0 and np.ndim(shift) == 0
    zSq, shifts = np.broadcast_arrays(np.asarray(z_sq, dtype=float), np.asarray(shift, dtype=float))
    z = np.sqrt(np.abs(zSq))
    with np.errstate(all='ignore'):
        real = scipy.special.psi(shifts + z) + scipy.special.psi(shifts - z)
        imaginary = 2.0 * np.real(scipy.special.psi(shifts + 1j * z))
    return _as_result(np.where(zSq >= 0, real, imaginary), scalar)


def bessel_j(nu: float, x: ArrayLike) -> ArrayLike:
    if np.any(np.asarray(x) < 0):
        raise DomainError("Bessel J is only evaluated for non-negative arguments!")
    return scipy.special.jv(nu, x)


def bessel_i(nu: float, x: ArrayLike) -> ArrayLike:
    if np.any(np.asarray(x) < 0):
        raise DomainError("Bessel I is only evaluated for non-negative arguments!")
    return scipy.special.iv(nu, x)


def bessel_y_int(n: int, x: ArrayLike) -> ArrayLike:
    if np.any(np.asarray(x) <= 0):
        raise DomainError("Bessel Y has a logarithmic branch point at 0!")
    return scipy.special.yn(n, x)


def bessel_k_int(n: int, x: ArrayLike) -> ArrayLike:
    if np.any(np.asarray(x) <= 0):
        raise DomainError("Bessel K has a logarithmic branch point at 0!")
    return scipy.special.kn(n, x)


def bessel_j_prime(nu: float, x: ArrayLike) -> ArrayLike:
    return scipy.special.jvp(nu, x)


def bessel_i_prime(nu: float, x: ArrayLike) -> ArrayLike:
    return scipy.special.ivp(nu, x)


def bessel_y_prime(n: int, x: ArrayLike) -> ArrayLike:
    return scipy.special.yvp(n, x)


def bessel_k_prime(n: int, x: ArrayLike) -> ArrayLike:
    return scipy.special.kvp(n, x)


def bessel_limit(mu: float, ell: float, x: float, branch: int) -> float:
    """
    Flat limit of the hypergeometric branches: Gamma(1 + mu) (2 / (ell x))^mu J_mu(ell x) for branch +1
    and the same with I_mu for branch -1.
    """
    argument = ell * x
    if argument <= 0:
        raise DomainError(f"Bessel limit requires ell * x > 0 but got {argument}!")
    bessel = scipy.special.jv(mu, argument) if branch > 0 else scipy.special.iv(mu, argument)
    return float(scipy.special.gamma(1 + mu) * (2 / argument) ** mu * bessel)


def _first_sign_change(function, what: str) -> float:
    grid = np.arange(_ZERO_SCAN_STEP, _ZERO_SCAN_END + _ZERO_SCAN_STEP / 2, _ZERO_SCAN_STEP)
    values = function(grid)
    changes = sign_changes(values)
    if not changes:
        raise ConvergenceError(f"Found no sign change for {what} on (0, {_ZERO_SCAN_END})!")
    index = changes[0]
    return bracketed_root(lambda x: float(function(x)), float(grid[index]), float(grid[index + 1]), what=what)


def bessel_first_zero(nu: float) -> float:
    """First positive zero of J_nu."""
    if nu < 0:
        raise DomainError(f"Order must be non-negative but got {nu}!")
    return _first_sign_change(lambda x: scipy.special.jv(nu, x), f"the first zero of J_{nu}")


def cross_product_zero(nu: float) -> float:
    """
    First positive zero of J'_nu I_nu - J_nu I'_nu. The recurrence relations reduce it to
    J_{nu+1} + J_nu I_{nu+1} / I_nu, which avoids the exponential growth of I_nu.
    """
    if nu < 0:
        raise DomainError(f"Order must be non-negative but got {nu}!")

    def reduced(x):
        return scipy.special.jv(nu + 1, x) + scipy.special.jv(nu, x) * scipy.special.ive(
            nu + 1, x
        ) / scipy.special.ive(nu, x)

    return _first_sign_change(reduced, f"the first cross-product zero of order {nu}")


def gauss_series(
    a_plus_b: ArrayLike, a_times_b: ArrayLike, c: ArrayLike, t: ArrayLike, cfg: SeriesConfig = DEFAULT_SERIES_CONFIG
) -> ArrayLike:
    """
    Power series of F(a, b; c; t) for parameters with real sum and product, broadcast over all arguments.
    Terms follow beta_{m+1} = beta_m (m^2 + m (a + b) + a b) / ((m + 1) (m + c)) t.
    """
    scalar = all(np.ndim(x) == 0 for x in (a_plus_b, a_times_b, c, t))
    s, p, cc, tt = np.broadcast_arrays(*(np.asarray(x, dtype=float) for x in (a_plus_b, a_times_b, c, t)))
    if np.any((cc <= 0) & (cc == np.round(cc))):
        raise DomainError("Third hypergeometric parameter must not be a non-positive integer!")
    if np.any(np.abs(tt) >= 1):
        raise DomainError("Hypergeometric power series requires |t| < 1!")

    total = np.ones(s.shape)
    term = np.ones(s.shape)
    smallCount = np.zeros(s.shape, dtype=int)
    for m in range(int(cfg.max_terms)):
        ratio = (m * m + m * s + p) / ((m + 1) * (m + cc)) * tt
        term = term * ratio
        total = total + term
        if not np.all(np.isfinite(total)):
            raise ConvergenceError(f"Hypergeometric series overflowed after {m + 1} terms!")
        small = (np.abs(term) <= cfg.rel_tol * np.abs(total)) & (np.abs(ratio) < 1)
        smallCount = np.where(small, smallCount + 1, 0)
        if np.all(smallCount >= 3):
            logger.debug("Hypergeometric series converged after %d terms.", m + 1)
            break
    else:
        raise ConvergenceError(
            f"Hypergeometric series did not converge within {cfg.max_terms} terms "
            f"(largest argument t = {np.max(tt)})!"
        )
    return _as_result(total, scalar)


def _mpmath_hyp2f1(a_plus_b: float, a_times_b: float, c: float, t: float) -> float:
    with mpmath.workdps(30):
        half = mpmath.mpf(a_plus_b) / 2
        root = mpmath.sqrt(half * half - mpmath.mpf(a_times_b))
        value = mpmath.hyp2f1(half - root, half + root, mpmath.mpf(c), mpmath.mpf(t))
        return float(mpmath.re(value))


def gauss_value(
    a_plus_b: ArrayLike, a_times_b: ArrayLike, c: ArrayLike, t: ArrayLike, cfg: SeriesConfig = DEFAULT_SERIES_CONFIG
) -> ArrayLike:
    """Like gauss_series but evaluates arguments above cfg.series_limit by analytic continuation."""
    scalar = all(np.ndim(x) == 0 for x in (a_plus_b, a_times_b, c, t))
    s, p, cc, tt = np.broadcast_arrays(*(np.asarray(x, dtype=float) for x in (a_plus_b, a_times_b, c, t)))
    if np.any(tt >= 1) or np.any(tt <= -1):
        raise DomainError("Hypergeometric functions are only evaluated for |t| < 1!")

    result = np.empty(s.shape)
    far = tt > cfg.series_limit
    if np.any(~far):
        result[~far] = gauss_series(s[~far], p[~far], cc[~far], tt[~far], cfg)
    for index in map(tuple, np.argwhere(far)):
        result[index] = _mpmath_hyp2f1(s[index], p[index], cc[index], tt[index])
    return _as_result(result, scalar)


def gauss_value_dt(
    a_plus_b: ArrayLike, a_times_b: ArrayLike, c: ArrayLike, t: ArrayLike, cfg: SeriesConfig = DEFAULT_SERIES_CONFIG
) -> ArrayLike:
    """d/dt F(a, b; c; t) = a b / c F(a + 1, b + 1; c + 1; t)."""
    s = np.asarray(a_plus_b, dtype=float)
    p = np.asarray(a_times_b, dtype=float)
    cc = np.asarray(c, dtype=float)
    value = p / cc * gauss_value(s + 2, p + s + 1, cc + 1, t, cfg)
    return float(value) if np.ndim(value) == 0 else value


def _check_hyp_argument(params: HypParams, t: ArrayLike) -> None:
    tt = np.asarray(t, dtype=float)
    if np.any(tt < 0) or np.any(tt >= 1):
        raise DomainError("The hypergeometric branches are only evaluated for t in [0, 1)!")
    if params.c - 1 <= 0 and np.any(tt > 0.999):
        raise ConvergenceError(
            f"Refusing to sum the series at t = {np.max(tt)} > 0.999 because c - a - b = {params.c - 1} <= 0!"
        )


def hyp_v(params: HypParams, t: ArrayLike, cfg: SeriesConfig = DEFAULT_SERIES_CONFIG) -> ArrayLike:
    """F(1/2 - Lambda, 1/2 + Lambda; c; t) by its power series."""
    _check_hyp_argument(params, t)
    return gauss_series(1.0, params.a_times_b, params.c, t, cfg)


def hyp_v_dt(params: HypParams, t: ArrayLike, cfg: SeriesConfig = DEFAULT_SERIES_CONFIG) -> ArrayLike:
    _check_hyp_argument(params, t)
    value = params.a_times_b / params.c * gauss_series(3.0, params.a_times_b + 2, params.c + 1, t, cfg)
    return float(value) if np.ndim(value) == 0 else value


def hyp_value(params: HypParams, t: ArrayLike, cfg: SeriesConfig = DEFAULT_SERIES_CONFIG) -> ArrayLike:
    """Same function as hyp_v but valid on all of [0, 1) thanks to the mpmath continuation."""
    if np.any(np.asarray(t) < 0):
        raise DomainError("The hypergeometric branches are only evaluated for t in [0, 1)!")
    return gauss_value(1.0, params.a_times_b, params.c, t, cfg)


def hyp_value_dt(params: HypParams, t: ArrayLike, cfg: SeriesConfig = DEFAULT_SERIES_CONFIG) -> ArrayLike:
    if np.any(np.asarray(t) < 0):
        raise DomainError("The hypergeometric branches are only evaluated for t in [0, 1)!")
    return gauss_value_dt(1.0, params.a_times_b, params.c, t, cfg)


def ferrers_p(mu_order: float, lambda_sq: float, x: ArrayLike, cfg: SeriesConfig = DEFAULT_SERIES_CONFIG) -> ArrayLike:
    """
    Ferrers function P^mu_nu(x) of non-positive order mu with nu (nu + 1) = Lambda^2 - 1/4:

        ((1 + x) / (1 - x))^(mu / 2) / Gamma(1 - mu) F(1/2 - Lambda, 1/2 + Lambda; 1 - mu; (1 - x) / 2)
    """
    if mu_order > 0:
        raise DomainError(f"Only non-positive orders are supported but got {mu_order}!")
    xx = np.asarray(x, dtype=float)
    if np.any(np.abs(xx) >= 1):
        raise DomainError("Ferrers functions are only defined on (-1, 1)!")
    prefactor = ((1 + xx) / (1 - xx)) ** (mu_order / 2) / scipy.special.gamma(1 - mu_order)
    value = prefactor * gauss_value(1.0, 0.25 - lambda_sq, 1 - mu_order, (1 - xx) / 2, cfg)
    return float(value) if np.ndim(value) == 0 else value


def klein_number(n: int, mu: float) -> int:
    """Closed form for the number of zeros of the oscillating branch on (0, 1), valid for n >= 3."""
    if n < 3:
        raise DomainError("The closed-form zero count is only established for n >= 3!")
    if not mu > 0:
        raise DomainError(f"mu must be positive but got {mu}!")
    # Largest integer strictly smaller than the argument.
    return math.ceil(math.sqrt((n - 1) ** 2 / 4 + mu) - (n - 3) / 2) - 1


def klein_zero_count(n: int, mu: float, cfg: SeriesConfig = DEFAULT_SERIES_CONFIG, resolution: int = 2**14) -> int:
    """Counts the zeros of t -> F(1/2 - Lambda_+, 1/2 + Lambda_+; n/2; t) on (0, 1) by a sign-change scan."""
    if n < 2:
        raise DomainError(f"Dimension must be at least 2 but got {n}!")
    if not mu > 0:
        raise DomainError(f"mu must be positive but got {mu}!")

    params = HypParams(lambda_sq=(n - 1) ** 2 / 4 + mu, c=n / 2)
    grid = np.arange(1, resolution) / resolution
    values = hyp_value(params, grid, cfg)
    changes = sign_changes(values)
    for index in changes:
        upper = next_nonzero(values, index)
        bracketed_root(
            lambda t: hyp_value(params, t, cfg), float(grid[index]), float(grid[upper]), what='a Klein zero'
        )

    if n >= 3 and len(changes) != klein_number(n, mu):
        logger.warning(
            "Sign-change scan found %d zeros for n = %d, mu = %s but the closed form predicts %d.",
            len(changes),
            n,
            mu,
            klein_number(n, mu),
        )
    return len(changes)


def is_half_integer(z_sq: float, tolerance: float = 1e-9) -> bool:
    """Returns True if z = sqrt(z_sq) is real and 1/2 + z is within tolerance of a positive integer."""
    if z_sq < 0:
        return False
    shifted = math.sqrt(z_sq) - 0.5
    return shifted > -tolerance and abs(shifted - round(shifted)) <= tolerance * max(1.0, math.sqrt(z_sq))


def nudge_degenerate(z_sq: float) -> float:
    """Moves z^2 off half-integer z, where the logarithmic series need their limiting forms."""
    if not is_half_integer(z_sq):
        return z_sq
    # A relative change of 1e-9 in lambda changes z^2 by roughly 2e-9 relative.
    nudged = z_sq * (1 + 2e-9)
    logger.info("Nudged degenerate parameter z^2 = %s to %s.", z_sq, nudged)
    return nudged
