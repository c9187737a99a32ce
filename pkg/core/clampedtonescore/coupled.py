"""
Two-cap comparison and the Rayleigh gate.

A cap C(L) is compared with pairs of disjoint caps of radii a <= b holding the same volume. The smallest root of
S(alpha, beta, .) is the tone of such a pair and the gate compares its extreme values: the first pole at the
half-volume cap against the tone of the single cap. The set of radii at which the gate fails is bounded above by
L_n, which yields the critical volume fraction v_n.
"""

import dataclasses
import logging
import math
from typing import Callable, Optional, Sequence

import numpy as np

from .geometry import CapSpec, SphereParams, L_of_alpha, alpha_of_L, alpha_of_volume_fraction, volume_fraction
from .ParallelEvaluator import ParallelEvaluator
from .tone import K, ToneSolution, cap_tone, cross_product_numerator, f_minus, f_plus, pole_f, pole_ladder
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

_BRACKET_SHRINK = 1e-8
_FALLBACK_SCAN_POINTS = 512
_THRESHOLD_GRID = (0.01, 0.99)
_CERTIFICATE_EPSILON = 1e-9


@dataclasses.dataclass(frozen=True)
class CapPair:
    """Two caps with parameters alpha <= beta whose volumes add up to the volume of C(L)."""

    alpha: float
    beta: float
    L: float

    def __post_init__(self):
        for name in ('alpha', 'beta'):
            value = getattr(self, name)
            if not 0 <= value < 1:
                raise DomainError(f"{name} must be in [0, 1) but got {value}!")

    @classmethod
    def from_alpha(cls, sp: SphereParams, L: float, alpha: float) -> 'CapPair':
        return cls(alpha=alpha, beta=beta_of_alpha(sp, L, alpha), L=L)

    def volume_residual(self, sp: SphereParams) -> float:
        """Relative violation of the volume constraint."""
        total = volume_fraction(sp.n, alpha_of_L(sp, self.L))
        return abs(volume_fraction(sp.n, self.alpha) + volume_fraction(sp.n, self.beta) - total) / total


@dataclasses.dataclass(frozen=True)
class GateReport:
    L: float
    L0: float
    f_left: float
    lam_right: float
    holds: bool
    margin: float
    ratio: float


@dataclasses.dataclass(frozen=True)
class RayleighThreshold:
    n: int
    L_n: float
    v_n: float
    kappa: float = 1.0
    crossings: tuple[float, ...] = ()


@dataclasses.dataclass(frozen=True)
class SeparationCertificate:
    """Piece-wise linear separation of the implicit functions p > q on (0, pi/2) for n = 3."""

    x1: float
    x2: float
    x3: Optional[float]
    slopes: tuple[float, ...]
    separation_slope: float
    min_gap: float
    holds: bool
    grid_size: int


def _weight(n: int, t: float) -> float:
    return (t * (1 - t)) ** (n / 2)


def S(sp: SphereParams, alpha: float, beta: float, lam: float, cfg: SeriesConfig = DEFAULT_SERIES_CONFIG) -> float:
    """Weighted sum of the cross-product functions of both caps. A vanishing cap contributes nothing."""
    total = 0.0
    for t in (alpha, beta):
        if not 0 <= t < 1:
            raise DomainError(f"Cap parameters must be in [0, 1) but got {t}!")
        if t > 0:
            total += _weight(sp.n, t) * K(sp, t, lam, cfg)
    return total


def _pole_cleared_S(sp: SphereParams, alpha: float, beta: float, lam, cfg: SeriesConfig):
    """S multiplied with F_+(alpha) F_+(beta), which is continuous across the poles of both caps."""
    alphaTerm = _weight(sp.n, alpha) * cross_product_numerator(sp, alpha, lam, cfg) / f_minus(sp, alpha, lam, cfg)
    betaTerm = _weight(sp.n, beta) * cross_product_numerator(sp, beta, lam, cfg) / f_minus(sp, beta, lam, cfg)
    return alphaTerm * f_plus(sp, beta, lam, cfg) + betaTerm * f_plus(sp, alpha, lam, cfg)


def beta_of_alpha(sp: SphereParams, L: float, alpha: float) -> float:
    """The second cap parameter beta such that both caps together have the volume of C(L)."""
    alphaL = alpha_of_L(sp, L)
    halfAlpha = alpha_of_volume_fraction(sp.n, volume_fraction(sp.n, alphaL) / 2)
    if not 0 <= alpha <= halfAlpha * (1 + 1e-12):
        raise DomainError(f"alpha must be in [0, {halfAlpha}] for L = {L} but got {alpha}!")
    if alpha == 0:
        return alphaL
    if sp.n == 2:
        beta = alphaL - alpha
    else:
        beta = alpha_of_volume_fraction(sp.n, volume_fraction(sp.n, alphaL) - volume_fraction(sp.n, alpha))
    return min(max(beta, halfAlpha), alphaL)


def _cap_at(sp: SphereParams, t: float) -> CapSpec:
    return CapSpec.from_radius(sp, L_of_alpha(sp, t))


def coupled_tone(sp: SphereParams, pair: CapPair, cfg: SeriesConfig = DEFAULT_SERIES_CONFIG) -> ToneSolution:
    """
    Smallest positive root of S for the given pair. It lies between the first pole of the larger cap and the
    next pole of either cap. For equal caps the bracket collapses and the limit, the first pole, is returned.
    """
    alpha, beta = sorted((pair.alpha, pair.beta))
    if alpha == 0:
        return cap_tone(sp, _cap_at(sp, beta), cfg)
    if alpha == beta:
        pole = pole_f(sp, 1, alpha, cfg)
        return ToneSolution.from_root(pole, pole, pole, 0.0)

    firstBeta, secondBeta = pole_ladder(sp, beta, 2, cfg)
    lower = firstBeta * (1 + _BRACKET_SHRINK)
    upper = min(pole_f(sp, 1, alpha, cfg), secondBeta) * (1 - _BRACKET_SHRINK)
    what = f"the coupled tone for alpha = {alpha}, beta = {beta}"

    def cleared(lam):
        return float(_pole_cleared_S(sp, alpha, beta, lam, cfg))

    if (cleared(lower) > 0) != (cleared(upper) > 0):
        lam = bracketed_root(cleared, lower, upper, what=what)
    else:
        logger.info("Seeded bracket [%s, %s] holds no sign change for %s, scanning it.", lower, upper, what)
        grid = np.linspace(lower, upper, _FALLBACK_SCAN_POINTS)
        values = _pole_cleared_S(sp, alpha, beta, grid, cfg)
        changes = sign_changes(values)
        if not changes:
            raise ConvergenceError(f"No root of {what} on the bracket [{lower}, {upper}]!")
        lam = bracketed_root(cleared, float(grid[changes[0]]), float(grid[next_nonzero(values, changes[0])]), what)

    return ToneSolution.from_root(lam, lower, upper, cleared(lam) / max(abs(cleared(lower)), abs(cleared(upper))))


def rayleigh_gate(sp: SphereParams, L: float, cfg: SeriesConfig = DEFAULT_SERIES_CONFIG) -> GateReport:
    cap = CapSpec.from_radius(sp, L)
    fLeft = pole_f(sp, 1, alpha_of_L(sp, cap.L0), cfg)
    lamRight = cap_tone(sp, cap, cfg).lam
    return GateReport(
        L=L,
        L0=cap.L0,
        f_left=fLeft,
        lam_right=lamRight,
        holds=fLeft >= lamRight,
        margin=fLeft - lamRight,
        ratio=fLeft / lamRight,
    )


def _gate_margin(n: int, kappa: float, L: float, cfg: SeriesConfig) -> float:
    """Module-level so that it can be pickled for worker processes."""
    return rayleigh_gate(SphereParams(n, kappa), L, cfg).margin / math.sqrt(kappa)


def scan_threshold(
    n: int,
    kappa: float,
    grid_size: int = 64,
    cfg: SeriesConfig = DEFAULT_SERIES_CONFIG,
    parallelization: Optional[int] = 1,
    progress: Optional[Callable[[int, int], None]] = None,
) -> RayleighThreshold:
    """
    Returns L_n, the supremum of the radii for which the gate fails, and the corresponding volume fraction v_n.
    The gate margin is sampled on a grid covering (0, pi / sqrt(kappa)) and every sign change is refined.
    """
    sp = SphereParams(n, kappa)
    if int(grid_size) != grid_size or grid_size < 64:
        raise DomainError(f"Grid size must be an integer >= 64 but got {grid_size}!")
    if n in (2, 3):
        return RayleighThreshold(n=n, L_n=0.0, v_n=0.0, kappa=kappa)

    grid = sp.max_radius * np.linspace(*_THRESHOLD_GRID, int(grid_size))
    with ParallelEvaluator(parallelization) as evaluator:
        margins = evaluator.map(_gate_margin, [(n, kappa, float(L), cfg) for L in grid], progress=progress)

    crossings = []
    for index in sign_changes(margins):
        crossings.append(
            bracketed_root(
                lambda L: _gate_margin(n, kappa, L, cfg),
                float(grid[index]),
                float(grid[next_nonzero(margins, index)]),
                what=f"the gate threshold for n = {n}",
                rtol=1e-12,
            )
        )
    logger.debug("Gate margin for n = %d changes sign at %s.", n, crossings)

    if margins[-1] < 0:
        raise ConvergenceError(f"Gate still fails at L = {grid[-1]} for n = {n}, the scan window is too small!")
    if len(crossings) > 1:
        logger.warning("Gate for n = %d fails on more than one interval: sign changes at %s.", n, crossings)
    if not crossings:
        return RayleighThreshold(n=n, L_n=0.0, v_n=0.0, kappa=kappa)

    L_n = crossings[-1]
    v_n = volume_fraction(n, alpha_of_L(sp, L_n))
    return RayleighThreshold(n=n, L_n=L_n, v_n=v_n, kappa=kappa, crossings=tuple(crossings))


def ratio_probe(
    sp: SphereParams, L_grid: Sequence[float], cfg: SeriesConfig = DEFAULT_SERIES_CONFIG
) -> tuple[list[float], bool]:
    """Ratios f_left / lam_right along L_grid and whether they are non-decreasing. Observed, not guaranteed."""
    ratios = [rayleigh_gate(sp, float(L), cfg).ratio for L in L_grid]
    return ratios, all(a <= b for a, b in zip(ratios, ratios[1:]))


def n2_gate_margin(kappa: float, grid_size: int = 200, cfg: SeriesConfig = DEFAULT_SERIES_CONFIG) -> float:
    """Minimum of (f_1(t / 2) - lambda(0, t)) / sqrt(kappa) over t in [1e-3, 1 - 1e-3] for n = 2."""
    sp = SphereParams(2, kappa)
    if int(grid_size) != grid_size or grid_size < 2:
        raise DomainError(f"Grid size must be an integer >= 2 but got {grid_size}!")
    margins = [
        (pole_f(sp, 1, t / 2, cfg) - cap_tone(sp, _cap_at(sp, t), cfg).lam) / sp.sqrt_kappa
        for t in np.linspace(1e-3, 1 - 1e-3, int(grid_size))
    ]
    return float(min(margins))


def separation_p(x: float) -> float:
    """The full cap angle y whose volume is twice that of the cap with angle x for n = 3."""
    if not 0 < x < math.pi / 2:
        raise DomainError(f"x must be in (0, pi/2) but got {x}!")
    target = 2 * (2 * x - math.sin(2 * x))
    return bracketed_root(lambda y: target - 2 * y + math.sin(2 * y), 0.0, math.pi, what=f"p({x})")


def _separation_Q(x: float, y: float) -> float:
    return math.sqrt(math.pi**2 - 2 * x * x) / math.tanh(y * math.sqrt(math.pi**2 / x**2 - 2)) - math.pi / math.tan(
        math.pi * y / x
    )


def separation_q(x: float) -> float:
    """Smallest cap angle y at which the pole of the half-volume cap with angle x becomes the single-cap tone."""
    if not 0 < x < math.pi / 2:
        raise DomainError(f"x must be in (0, pi/2) but got {x}!")
    return bracketed_root(
        lambda y: _separation_Q(x, y),
        x * (1 + _CERTIFICATE_EPSILON),
        x * (2 - _CERTIFICATE_EPSILON),
        what=f"q({x})",
    )


def separation_slope() -> float:
    """First root of coth(c pi) = cot(c pi) above 1."""
    return bracketed_root(
        lambda c: 1 / math.tanh(c * math.pi) - 1 / math.tan(c * math.pi),
        1 + _CERTIFICATE_EPSILON,
        1.5,
        what="the separation slope",
    )


def _line_crossing(slope: float, lower: float) -> Optional[float]:
    """Zero of x -> Q(x, slope x) on (lower, pi/2) or None if there is no sign change."""

    def function(x):
        return _separation_Q(x, slope * x)

    upper = math.pi / 2 - _CERTIFICATE_EPSILON
    if (function(lower) > 0) == (function(upper) > 0):
        return None
    return bracketed_root(function, lower, upper, what=f"the crossing of the line with slope {slope}")


def n3_separation_certificate(grid_size: int = 200) -> SeparationCertificate:
    """
    Separates p from q by lines y = k x through the origin. The first line has the slope 2^(1/3) of the small-cap
    limit of p, each further slope is p(x_i) / x_i at the crossing x_i of the previous line with q.
    """
    if int(grid_size) != grid_size or grid_size < 2:
        raise DomainError(f"Grid size must be an integer >= 2 but got {grid_size}!")

    slopes = [2 ** (1 / 3)]
    x1 = _line_crossing(slopes[0], 1e-6)
    if x1 is None:
        raise ConvergenceError("The first separating line does not cross q on (0, pi/2)!")
    slopes.append(separation_p(x1) / x1)
    x2 = _line_crossing(slopes[1], x1)
    if x2 is None:
        raise ConvergenceError(f"The second separating line does not cross q on ({x1}, pi/2)!")
    slopes.append(separation_p(x2) / x2)
    x3 = _line_crossing(slopes[2], x2)

    grid = np.linspace(0.01, math.pi / 2 - 0.01, int(grid_size))
    minGap = min(separation_p(float(x)) - separation_q(float(x)) for x in grid)
    return SeparationCertificate(
        x1=x1,
        x2=x2,
        x3=x3,
        slopes=tuple(slopes),
        separation_slope=separation_slope(),
        min_gap=float(minGap),
        holds=minGap > 0,
        grid_size=int(grid_size),
    )
