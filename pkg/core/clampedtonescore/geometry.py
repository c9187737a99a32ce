import dataclasses
import logging
import math

import scipy.integrate
import scipy.special

from .utils import ConvergenceError, DomainError, bracketed_root

logger = logging.getLogger(__name__)


@dataclasses.dataclass(frozen=True)
class SphereParams:
    """Model sphere of dimension n and constant curvature kappa, i.e., radius 1 / sqrt(kappa)."""

    n: int
    kappa: float

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 2:
            raise DomainError(f"Dimension must be an integer >= 2 but got {self.n}!")
        if not (math.isfinite(self.kappa) and self.kappa > 0):
            raise DomainError(f"Curvature must be positive and finite but got {self.kappa}!")

    @property
    def sqrt_kappa(self) -> float:
        return math.sqrt(self.kappa)

    @property
    def max_radius(self) -> float:
        """Geodesic radius of the antipodal point, i.e., of the cap covering the whole sphere."""
        return math.pi / self.sqrt_kappa

    @property
    def volume(self) -> float:
        n = self.n
        return 2 * math.pi ** ((n + 1) / 2) / math.gamma((n + 1) / 2) * self.kappa ** (-n / 2)


@dataclasses.dataclass(frozen=True)
class CapSpec:
    """Geodesic cap C(L) with alpha = sin^2(sqrt(kappa) L / 2) and the half-volume radius L0."""

    L: float
    alpha: float
    L0: float

    @classmethod
    def from_radius(cls, sp: SphereParams, L: float) -> 'CapSpec':
        if not 0 < L < sp.max_radius:
            raise DomainError(f"Cap radius must be in (0, {sp.max_radius}) but got {L}!")
        return cls(L=L, alpha=alpha_of_L(sp, L), L0=half_cap_radius(sp, L))


@dataclasses.dataclass(frozen=True)
class BeltSpec:
    """Spherical belt between the geodesic circles of radii r < R around the north pole."""

    r: float
    R: float

    def __post_init__(self):
        if not 0 < self.r < self.R:
            raise DomainError(f"Belt radii must satisfy 0 < r < R but got r = {self.r}, R = {self.R}!")

    def check(self, kappa: float) -> None:
        if not kappa > 0:
            raise DomainError(f"Curvature must be positive but got {kappa}!")
        if not self.R < math.pi / math.sqrt(kappa):
            raise DomainError(f"Outer belt radius {self.R} must be smaller than pi / sqrt(kappa)!")


def unit_ball_volume(n: int) -> float:
    """omega_n, the volume of the unit ball in R^n."""
    return math.pi ** (n / 2) / math.gamma(n / 2 + 1)


def alpha_of_L(sp: SphereParams, L: float) -> float:
    if not 0 < L <= sp.max_radius:
        raise DomainError(f"Cap radius must be in (0, {sp.max_radius}] but got {L}!")
    if L == sp.max_radius:
        return 1.0
    return math.sin(sp.sqrt_kappa * L / 2) ** 2


def L_of_alpha(sp: SphereParams, alpha: float) -> float:
    if not 0 < alpha <= 1:
        raise DomainError(f"alpha must be in (0, 1] but got {alpha}!")
    return 2 * math.asin(math.sqrt(alpha)) / sp.sqrt_kappa


def volume_fraction(n: int, alpha: float) -> float:
    """V(C(L)) / V(S^n) as the regularized symmetric incomplete beta function at alpha_L."""
    return float(scipy.special.betainc(n / 2, n / 2, alpha))


def alpha_of_volume_fraction(n: int, fraction: float) -> float:
    if not 0 <= fraction <= 1:
        raise DomainError(f"Volume fraction must be in [0, 1] but got {fraction}!")
    if n == 2:
        return fraction
    alpha = float(scipy.special.betaincinv(n / 2, n / 2, fraction))
    if 0 < fraction < 1 and abs(volume_fraction(n, alpha) - fraction) > 1e-12 * fraction:
        logger.debug("Polishing the inverse incomplete beta function at fraction %s.", fraction)
        alpha = bracketed_root(
            lambda x: volume_fraction(n, x) - fraction, 0.0, 1.0, what='the inverse volume fraction', xtol=1e-300
        )
    return alpha


def cap_volume(sp: SphereParams, L: float) -> float:
    alpha = alpha_of_L(sp, L)
    if sp.n == 2:
        return 4 * math.pi / sp.kappa * alpha
    if sp.n == 3:
        angle = sp.sqrt_kappa * L
        return math.pi * (2 * angle - math.sin(2 * angle)) * sp.kappa ** -1.5
    return sp.volume * volume_fraction(sp.n, alpha)


def cap_volume_quadrature(sp: SphereParams, L: float) -> float:
    """Independent evaluation of the cap volume by adaptive quadrature in the alpha variable."""
    n = sp.n
    alpha = alpha_of_L(sp, L)
    integral, error = scipy.integrate.quad(
        lambda t: (t * (1 - t)) ** ((n - 2) / 2), 0.0, alpha, epsabs=0.0, epsrel=1e-12, limit=200
    )
    if error > 1e-10 * abs(integral):
        raise ConvergenceError(f"Volume quadrature did not reach the requested accuracy (error {error})!")
    return n * unit_ball_volume(n) * sp.kappa ** (-n / 2) * 2 ** (n - 1) * integral


def half_cap_alpha(sp: SphereParams, L: float) -> float:
    """alpha of the cap holding half the volume of C(L)."""
    return alpha_of_volume_fraction(sp.n, volume_fraction(sp.n, alpha_of_L(sp, L)) / 2)


def half_cap_radius(sp: SphereParams, L: float) -> float:
    if not 0 < L <= sp.max_radius:
        raise DomainError(f"Cap radius must be in (0, {sp.max_radius}] but got {L}!")
    return L_of_alpha(sp, half_cap_alpha(sp, L))
