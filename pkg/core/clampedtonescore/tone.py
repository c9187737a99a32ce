"""
Fundamental tone of a clamped spherical cap.

The radial solutions of (Delta +- lambda^2) u = 0 on the cap are

    u_+-(theta) = cos^(2 - n)(theta / 2) F_+-(sin^2(theta / 2)),
    F_+- = F(1/2 - Lambda_+-, 1/2 + Lambda_+-; n / 2; t),  Lambda_+-^2 = (n - 1)^2 / 4 +- lambda^2 / kappa,

and the clamped conditions at t = alpha_L reduce to the vanishing of K = F'_- / F_- - F'_+ / F_+. The zeros of F_+
in lambda, the pole ladder, bracket the roots of K.
"""

import dataclasses
import logging
import math
from typing import Optional

import numpy as np
import scipy.special

from .geometry import CapSpec, SphereParams, unit_ball_volume
from .specfun import (
    ArrayLike,
    HypParams,
    bessel_first_zero,
    cross_product_zero,
    digamma_pair,
    gauss_value,
    gauss_value_dt,
)
from .utils import (
    DEFAULT_SERIES_CONFIG,
    ConvergenceError,
    DomainError,
    PoleProximityError,
    SeriesConfig,
    bracketed_root,
    sign_changes,
)

logger = logging.getLogger(__name__)

# The pole scan runs in u = lambda * L_t, in which the poles are close to Bessel-type zeros for small caps.
_POLE_SCAN_GEOMETRIC = np.geomspace(1e-7, 0.5, 40, endpoint=False)
_POLE_SCAN_STEP = 0.1
_POLE_SCAN_CHUNK = 128
_POLE_RELATIVE_TOLERANCE = 1e-12
_BRACKET_SHRINK = 1e-8
_FALLBACK_SCAN_POINTS = 512


@dataclasses.dataclass(frozen=True)
class LambdaSquares:
    lam_plus_sq: float
    lam_minus_sq: float

    @classmethod
    def from_lambda(cls, sp: SphereParams, lam: float) -> 'LambdaSquares':
        base = (sp.n - 1) ** 2 / 4
        mu = lam * lam / sp.kappa
        return cls(lam_plus_sq=base + mu, lam_minus_sq=base - mu)

    @property
    def mu(self) -> float:
        return (self.lam_plus_sq - self.lam_minus_sq) / 2

    def params(self, n: int) -> tuple[HypParams, HypParams]:
        """Returns the hypergeometric parameters of the oscillating and of the monotone branch."""
        return HypParams(self.lam_plus_sq, n / 2), HypParams(self.lam_minus_sq, n / 2)


@dataclasses.dataclass(frozen=True)
class ToneSolution:
    """The fourth root lam of a fundamental tone Lambda together with the bracket it was refined in."""

    lam: float
    Lambda: float
    bracket_lo: float
    bracket_hi: float
    residual: float

    @classmethod
    def from_root(cls, lam: float, bracket_lo: float, bracket_hi: float, residual: float) -> 'ToneSolution':
        return cls(lam=lam, Lambda=lam**4, bracket_lo=bracket_lo, bracket_hi=bracket_hi, residual=residual)


def _check_t(t: float) -> None:
    if not 0 < t < 1:
        raise DomainError(f"The cap parameter t must be in (0, 1) but got {t}!")


def _branch_products(sp: SphereParams, lam: ArrayLike) -> tuple[np.ndarray, np.ndarray]:
    """Returns a * b = 1/4 - Lambda^2 for the oscillating and the monotone branch."""
    mu = np.asarray(lam, dtype=float) ** 2 / sp.kappa
    base = (sp.n - 1) ** 2 / 4
    return 0.25 - (base + mu), 0.25 - (base - mu)


def f_plus(sp: SphereParams, t: ArrayLike, lam: ArrayLike, cfg: SeriesConfig = DEFAULT_SERIES_CONFIG) -> ArrayLike:
    return gauss_value(1.0, _branch_products(sp, lam)[0], sp.n / 2, t, cfg)


def f_minus(sp: SphereParams, t: ArrayLike, lam: ArrayLike, cfg: SeriesConfig = DEFAULT_SERIES_CONFIG) -> ArrayLike:
    return gauss_value(1.0, _branch_products(sp, lam)[1], sp.n / 2, t, cfg)


def branch_values(sp: SphereParams, t: ArrayLike, lam: ArrayLike, cfg: SeriesConfig = DEFAULT_SERIES_CONFIG):
    """Returns F_-, F'_-, F_+, F'_+ with derivatives taken with respect to t."""
    plus, minus = _branch_products(sp, lam)
    c = sp.n / 2
    return (
        gauss_value(1.0, minus, c, t, cfg),
        gauss_value_dt(1.0, minus, c, t, cfg),
        gauss_value(1.0, plus, c, t, cfg),
        gauss_value_dt(1.0, plus, c, t, cfg),
    )


def cross_product_numerator(
    sp: SphereParams, t: float, lam: ArrayLike, cfg: SeriesConfig = DEFAULT_SERIES_CONFIG
) -> ArrayLike:
    """F'_- F_+ - F'_+ F_-, which has the zeros of K but none of its poles because F_- > 0."""
    fMinus, dfMinus, fPlus, dfPlus = branch_values(sp, t, lam, cfg)
    return dfMinus * fPlus - dfPlus * fMinus


def _numerator_residual(sp: SphereParams, t: float, lam: float, cfg: SeriesConfig) -> float:
    fMinus, dfMinus, fPlus, dfPlus = branch_values(sp, t, lam, cfg)
    scale = abs(dfMinus * fPlus) + abs(dfPlus * fMinus)
    return 0.0 if scale == 0 else float((dfMinus * fPlus - dfPlus * fMinus) / scale)


def _cot_term(lambda_sq: float, x: float) -> float:
    """Lambda cot(2 Lambda x) continued to Lambda = 0 and to imaginary Lambda."""
    if abs(lambda_sq) < 1e-14:
        return 1 / (2 * x)
    if lambda_sq > 0:
        root = math.sqrt(lambda_sq)
        angle = 2 * root * x
        if abs(math.sin(angle)) < 1e-12:
            raise PoleProximityError(f"Closed form evaluated at a pole: Lambda = {root}, x = {x}!")
        return root * math.cos(angle) / math.sin(angle)
    root = math.sqrt(-lambda_sq)
    return root / math.tanh(2 * root * x)


def _K_closed_form(sp: SphereParams, t: float, lam: float) -> float:
    squares = LambdaSquares.from_lambda(sp, lam)
    x = math.asin(math.sqrt(t))
    return (_cot_term(squares.lam_minus_sq, x) - _cot_term(squares.lam_plus_sq, x)) / math.sqrt(t * (1 - t))


def _K_series(sp: SphereParams, t: float, lam: float, cfg: SeriesConfig) -> float:
    fMinus, dfMinus, fPlus, dfPlus = branch_values(sp, t, lam, cfg)
    if abs(fPlus) < 1e-12 * max(abs(fMinus), 1.0):
        raise PoleProximityError(f"F_+ nearly vanishes at t = {t}, lambda = {lam}: K is evaluated at a pole!")
    return float(dfMinus / fMinus - dfPlus / fPlus)


def K(
    sp: SphereParams, t: float, lam: float, cfg: SeriesConfig = DEFAULT_SERIES_CONFIG, closed_form: bool = True
) -> float:
    """
    The cross-product function K(t, lambda) = F'_- / F_- - F'_+ / F_+. For n = 3 the hypergeometric functions are
    elementary and the closed form is used unless closed_form is False.
    """
    _check_t(t)
    if lam < 0:
        raise DomainError(f"lambda must be non-negative but got {lam}!")
    if lam == 0:
        return 0.0
    if sp.n == 3 and closed_form:
        return _K_closed_form(sp, t, lam)
    return _K_series(sp, t, lam, cfg)


def _pole_ladder_closed_form(sp: SphereParams, t: float, count: int) -> list[float]:
    x = math.asin(math.sqrt(t))
    return [math.sqrt(sp.kappa * ((m * math.pi / (2 * x)) ** 2 - 1)) for m in range(1, count + 1)]


def _pole_ladder_scan(sp: SphereParams, t: float, count: int, cfg: SeriesConfig) -> tuple[float, ...]:
    arcLength = 2 * math.asin(math.sqrt(t)) / sp.sqrt_kappa
    uMax = (count + sp.n / 2 + 4) * math.pi
    grid = np.concatenate([_POLE_SCAN_GEOMETRIC, np.arange(0.5, uMax + _POLE_SCAN_STEP / 2, _POLE_SCAN_STEP)])
    lambdas = grid / arcLength

    poles: list[float] = []
    for start in range(0, len(lambdas), _POLE_SCAN_CHUNK):
        # Overlap by one point so that sign changes across chunk borders are not lost.
        chunk = lambdas[max(start - 1, 0) : start + _POLE_SCAN_CHUNK]
        values = f_plus(sp, t, chunk, cfg)
        for index in sign_changes(values):
            upper = index + 1
            while values[upper] == 0 or not math.isfinite(values[upper]):
                upper += 1
            poles.append(
                bracketed_root(
                    lambda lam: f_plus(sp, t, lam, cfg),
                    float(chunk[index]),
                    float(chunk[upper]),
                    what=f"pole {len(poles) + 1} of K at t = {t}",
                    rtol=_POLE_RELATIVE_TOLERANCE,
                )
            )
            if len(poles) >= count:
                logger.debug("Found %d poles at t = %s after scanning up to u = %s.", count, t, grid[start])
                return tuple(poles)

    raise ConvergenceError(
        f"Found only {len(poles)} of {count} zeros of F_+ at t = {t} in the scan window (0, {lambdas[-1]})!"
    )


def pole_ladder(sp: SphereParams, t: float, count: int, cfg: SeriesConfig = DEFAULT_SERIES_CONFIG) -> list[float]:
    """The first count positive zeros of lambda -> F_+(t, lambda) in increasing order."""
    _check_t(t)
    if int(count) != count or count < 1:
        raise DomainError(f"Pole count must be a positive integer but got {count}!")
    if sp.n == 3:
        return _pole_ladder_closed_form(sp, t, int(count))
    return list(_pole_ladder_scan(sp, float(t), int(count), cfg))


def pole_f(sp: SphereParams, m: int, t: float, cfg: SeriesConfig = DEFAULT_SERIES_CONFIG) -> float:
    """The m-th pole of K(t, .), i.e., the m-th positive zero of F_+(t, .)."""
    return pole_ladder(sp, t, m, cfg)[-1]


def cap_tone(sp: SphereParams, cap: CapSpec, cfg: SeriesConfig = DEFAULT_SERIES_CONFIG) -> ToneSolution:
    """Smallest positive zero of K(alpha_L, .), which lies strictly between the first two poles."""
    t = cap.alpha
    firstPole, secondPole = pole_ladder(sp, t, 2, cfg)
    lower = firstPole * (1 + _BRACKET_SHRINK)
    upper = secondPole * (1 - _BRACKET_SHRINK)

    def numerator(lam):
        return float(cross_product_numerator(sp, t, lam, cfg))

    if (numerator(lower) > 0) != (numerator(upper) > 0):
        lam = bracketed_root(numerator, lower, upper, what=f"the cap tone for L = {cap.L}")
    else:
        logger.info("Seeded bracket [%s, %s] holds no sign change, scanning it for L = %s.", lower, upper, cap.L)
        grid = np.linspace(lower, upper, _FALLBACK_SCAN_POINTS)
        changes = sign_changes(cross_product_numerator(sp, t, grid, cfg))
        if not changes:
            raise ConvergenceError(f"No cap tone found for L = {cap.L} on the pole bracket [{lower}, {upper}]!")
        lam = bracketed_root(
            numerator, float(grid[changes[0]]), float(grid[changes[0] + 1]), what=f"the cap tone for L = {cap.L}"
        )

    return ToneSolution.from_root(lam, lower, upper, _numerator_residual(sp, t, lam, cfg))


def small_cap_estimate(sp: SphereParams, L: float) -> float:
    if not L > 0:
        raise DomainError(f"Cap radius must be positive but got {L}!")
    return cross_product_zero(sp.n / 2 - 1) / L


def ball_tone(n: int, L: float) -> float:
    """Fundamental tone of the clamped Euclidean ball of radius L."""
    if not L > 0:
        raise DomainError(f"Ball radius must be positive but got {L}!")
    return cross_product_zero(n / 2 - 1) ** 4 / L**4


def half_cap_pole_limit(sp: SphereParams) -> float:
    return math.sqrt(sp.n * sp.kappa)


def small_cap_ratio_limit(n: int) -> float:
    """Limit of f_1(alpha_L0) / lambda(0, alpha_L) for vanishing caps."""
    return 2 ** (1 / n) * bessel_first_zero(n / 2 - 1) / cross_product_zero(n / 2 - 1)


def gap_function(n: int, mu: float) -> float:
    """Left-hand side of the transcendental equation whose first root in mu is the large-cap gap constant."""
    if n == 2:
        if not mu > 0:
            raise DomainError(f"mu must be positive but got {mu}!")
        root = math.sqrt(0.25 + mu)
        return (
            math.pi / 2 * math.tan(math.pi * root)
            - float(scipy.special.psi(0.5 + root))
            + float(digamma_pair(0.25 - mu, 0.5)) / 2
        )
    if n == 3:
        if not mu >= 0:
            raise DomainError(f"mu must be non-negative but got {mu}!")
        if abs(mu - 1) < 1e-12:
            monotone = 1 / math.pi
        elif mu > 1:
            monotone = math.sqrt(mu - 1) / math.tanh(math.pi * math.sqrt(mu - 1))
        else:
            monotone = math.sqrt(1 - mu) / math.tan(math.pi * math.sqrt(1 - mu))
        oscillating = math.sqrt(mu + 1)
        return monotone - oscillating / math.tan(math.pi * oscillating)
    raise DomainError(f"Gap constants only exist for n in {{2, 3}} but got {n}!")


def gap_mu(n: int) -> float:
    if n == 2:
        # The root-free part (0, 1/4] is only sampled because tan has its pole at mu = 0.
        samples = [gap_function(2, mu) for mu in np.geomspace(1e-6, 0.25, 64)]
        if any(value > 0 for value in samples):
            logger.warning("The gap function for n = 2 is positive somewhere on (0, 1/4]!")
        lower, upper = 0.25, 2 - 1e-9
    elif n == 3:
        lower, upper = 1.0, 3 - 1e-9
    else:
        raise DomainError(f"Gap constants only exist for n in {{2, 3}} but got {n}!")

    mu = bracketed_root(lambda x: gap_function(n, x), lower, upper, what=f"the gap constant for n = {n}")
    residual = gap_function(n, mu)
    if abs(residual) > 1e-9:
        raise ConvergenceError(f"Gap constant for n = {n} has residual {residual} on [{lower}, {upper}]!")
    return mu


def large_cap_gap(sp: SphereParams) -> float:
    """Limit of the cap tone as the cap covers the whole sphere."""
    if sp.n in (2, 3):
        return gap_mu(sp.n) ** 2 * sp.kappa**2
    return 0.0


def w_n(n: int) -> float:
    if int(n) != n or n < 2:
        raise DomainError(f"Dimension must be an integer >= 2 but got {n}!")
    if n in (2, 3):
        return 1.0
    return 2 ** (4 / n) * (bessel_first_zero(n / 2 - 1) / cross_product_zero(n / 2 - 1)) ** 4


def avr_lower_bound(n: int, avr: float, volume: float) -> float:
    """Lower bound for the tone of a domain of the given volume on a manifold with asymptotic volume ratio avr."""
    if not 0 < avr <= 1:
        raise DomainError(f"Asymptotic volume ratio must be in (0, 1] but got {avr}!")
    if not volume > 0:
        raise DomainError(f"Volume must be positive but got {volume}!")
    radius = (volume / unit_ball_volume(n)) ** (1 / n)
    return avr ** (4 / n) * w_n(n) * ball_tone(n, radius)


class CapProfile:
    """
    Radial profile of the first clamped eigenfunction on a cap, normalized to a maximum of 1.

    The tone is solved once on construction. Calling the object evaluates the profile at angles
    theta = sqrt(kappa) r in [0, sqrt(kappa) L].
    """

    def __init__(
        self,
        sp: SphereParams,
        cap: CapSpec,
        cfg: SeriesConfig = DEFAULT_SERIES_CONFIG,
        tone: Optional[ToneSolution] = None,
        resolution: int = 1024,
    ):
        self.sp = sp
        self.cap = cap
        self.cfg = cfg
        self.tone = cap_tone(sp, cap, cfg) if tone is None else tone
        self.max_angle = sp.sqrt_kappa * cap.L

        plus, minus = _branch_products(sp, self.tone.lam)
        self._plus = float(plus)
        self._minus = float(minus)
        self._ratio = float(
            gauss_value(1.0, self._plus, sp.n / 2, cap.alpha, cfg)
            / gauss_value(1.0, self._minus, sp.n / 2, cap.alpha, cfg)
        )

        samples = self.raw(np.linspace(0, self.max_angle, resolution))
        self.scale = float(samples[np.argmax(np.abs(samples))])
        if self.scale == 0:
            raise ConvergenceError(f"Eigenfunction of the cap with L = {cap.L} vanishes on the sampling grid!")

    def raw(self, theta: ArrayLike) -> ArrayLike:
        s = np.sin(np.asarray(theta, dtype=float) / 2) ** 2
        c = self.sp.n / 2
        value = np.cos(np.asarray(theta, dtype=float) / 2) ** (2 - self.sp.n) * (
            gauss_value(1.0, self._plus, c, s, self.cfg) - self._ratio * gauss_value(1.0, self._minus, c, s, self.cfg)
        )
        return float(value) if np.ndim(value) == 0 else value

    def __call__(self, theta: ArrayLike) -> ArrayLike:
        angles = np.asarray(theta, dtype=float)
        if np.any(angles < 0) or np.any(angles > self.max_angle * (1 + 1e-12)):
            raise DomainError(f"Profile angles must be in [0, {self.max_angle}]!")
        value = self.raw(np.minimum(angles, self.max_angle)) / self.scale
        return float(value) if np.ndim(value) == 0 else value


def cap_eigenprofile(
    sp: SphereParams, cap: CapSpec, theta: ArrayLike, cfg: SeriesConfig = DEFAULT_SERIES_CONFIG
) -> ArrayLike:
    return CapProfile(sp, cap, cfg)(theta)


def branch_ode_residual(
    sp: SphereParams,
    lam: float,
    branch: int,
    theta: float,
    step: float = 1e-4,
    cfg: SeriesConfig = DEFAULT_SERIES_CONFIG,
) -> float:
    """
    Relative residual of (Delta_kappa + branch * lambda^2) u = 0 for the radial branch u_+ (branch = 1) or u_-
    (branch = -1) with the Laplacian approximated by central differences in theta.
    """
    if branch not in (1, -1):
        raise DomainError(f"Branch must be 1 or -1 but got {branch}!")
    if not step < theta < math.pi - step:
        raise DomainError(f"Angle must be in ({step}, {math.pi - step}) but got {theta}!")
    plus, minus = _branch_products(sp, lam)
    product = float(plus if branch > 0 else minus)

    angles = np.array([theta - step, theta, theta + step])
    values = np.cos(angles / 2) ** (2 - sp.n) * gauss_value(1.0, product, sp.n / 2, np.sin(angles / 2) ** 2, cfg)
    second = (values[2] - 2 * values[1] + values[0]) / step**2
    first = (values[2] - values[0]) / (2 * step)
    radial = sp.kappa * second
    angular = sp.kappa * (sp.n - 1) / math.tan(theta) * first
    zeroth = branch * lam * lam * values[1]
    return abs(radial + angular + zeroth) / (abs(radial) + abs(angular) + abs(zeroth))
