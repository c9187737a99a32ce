"""
Clamped spherical belts on the 2-sphere.

The first eigenfunction on a belt is either azimuthally invariant (fixed sign, SP) or of the form w(theta) sin(xi)
with two nodal arcs (sign changing, SC). In both cases the radial part is a combination of four solutions of the
factors (Delta_kappa +- lambda^2) w = 0, which are Legendre-type functions with parameter z^2 = 1/4 +- lambda^2 / kappa:

    SP: P(z, s) = F(1/2 - z, 1/2 + z; 1; s) and the logarithmic solution Q,
    SC: F(z, s) = F(3/2 - z, 3/2 + z; 2; s) and the logarithmic solution H, both multiplied with sin(theta),

with s = sin^2(theta / 2). The clamped conditions at both boundary circles give a 4x4 linear system whose
determinant vanishes at the eigenvalues.
"""

import dataclasses
import enum
import logging
import math
from typing import Callable, NamedTuple, Optional

import numpy as np
import scipy.special

from .geometry import BeltSpec
from .specfun import ArrayLike, digamma_pair, nudge_degenerate
from .utils import (
    DEFAULT_SERIES_CONFIG,
    ConvergenceError,
    DomainError,
    NullspaceError,
    SeriesConfig,
    bracketed_root,
    next_nonzero,
    sign_changes,
)

logger = logging.getLogger(__name__)

_ROOT_RTOL = 1e-12
_SCAN_GROWTH = 1.01
_SCAN_CHUNK = 64
_NULLSPACE_TOLERANCE = 1e-6
_RANK_TOLERANCE = 1e-9
_CONDITION_FLOOR = 1e-10
_NEIGHBORS = np.array([0.9, 1.1])


class BeltKind(enum.Enum):
    SP = 'SP'
    SC = 'SC'


class Regime(enum.Enum):
    FIXED_SIGN = 'FixedSign'
    SIGN_CHANGING = 'SignChanging'
    INDETERMINATE = 'Indeterminate'


@dataclasses.dataclass(frozen=True)
class BeltSolution:
    lambda_sp: float
    lambda_sc: float
    regime: Regime
    tolerance: float


@dataclasses.dataclass(frozen=True)
class CdsResult:
    """Critical ratio R / r together with the common tone for r = 1 (lambda1_c) and for R = 1 (lambda2_c)."""

    c_cds: float
    lambda1_c: float
    lambda2_c: float


class BasisPair(NamedTuple):
    """The regular and the logarithmic solution with their theta-derivatives."""

    regular: ArrayLike
    regular_prime: ArrayLike
    logarithmic: ArrayLike
    logarithmic_prime: ArrayLike


# Hypergeometric parameters (c, a0) with a = a0 - z, b = a0 + z of the regular solutions.
_SERIES_PARAMETERS = {BeltKind.SP: (1.0, 0.5), BeltKind.SC: (2.0, 1.5)}


def _nudge(z_sq: np.ndarray) -> np.ndarray:
    return np.array([nudge_degenerate(float(x)) for x in z_sq.flat]).reshape(z_sq.shape)


def _initial_digamma(z_sq: np.ndarray, c: float, a0: float) -> np.ndarray:
    """
    E_0 = Psi(a0 + z) + Psi(a0 - z) - Psi(1) - Psi(c). For z^2 > 1/4, Psi(a0 - z) is replaced with Psi(1 - a0 + z),
    which changes the logarithmic solution by the multiple pi tan(pi z) of the regular one and removes its poles
    at half-integer z.
    """
    z = np.sqrt(np.abs(z_sq))
    with np.errstate(all='ignore'):
        regularized = scipy.special.psi(a0 + z) + scipy.special.psi(z + 1 - a0)
    pair = np.where(z_sq > 0.25, regularized, digamma_pair(np.minimum(z_sq, 0.25), a0))
    return pair - scipy.special.psi(1.0) - scipy.special.psi(c)


def _log_series(z_sq: ArrayLike, s: ArrayLike, kind: BeltKind, cfg: SeriesConfig, singular: bool = True):
    """
    Returns the regular solution, the logarithmic solution and their s-derivatives. The logarithmic solution is
    A ln s + sum_m beta_m s^m E_m (+ 1 / ((1/4 - z^2) s) for SC unless singular is False) with the coefficients
    beta_m of the regular solution A and E_{m+1} = E_m + 2 (m + a0) / ((m + a0)^2 - z^2) - 1 / (m + 1) - 1 / (m + c).
    """
    c, a0 = _SERIES_PARAMETERS[kind]
    zSq, ss = np.broadcast_arrays(np.asarray(z_sq, dtype=float), np.asarray(s, dtype=float))
    zSq = _nudge(zSq)
    ss = np.array(ss)
    if np.any(ss <= 0) or np.any(ss >= 1):
        raise DomainError("The belt series are only evaluated for theta in (0, pi)!")

    e = _initial_digamma(zSq, c, a0)
    term = np.ones(zSq.shape)
    regular = np.ones(zSq.shape)
    regularPrime = np.zeros(zSq.shape)
    logSum = e.copy()
    logSumPrime = np.zeros(zSq.shape)
    smallCount = np.zeros(zSq.shape, dtype=int)
    for m in range(int(cfg.max_terms)):
        shifted = (m + a0) ** 2 - zSq
        ratio = shifted / ((m + 1) * (m + c)) * ss
        e = e + 2 * (m + a0) / shifted - 1 / (m + 1) - 1 / (m + c)
        term = term * ratio
        regular = regular + term
        regularPrime = regularPrime + (m + 1) * term / ss
        logSum = logSum + term * e
        logSumPrime = logSumPrime + (m + 1) * term * e / ss
        if not (np.all(np.isfinite(regular)) and np.all(np.isfinite(logSum))):
            raise ConvergenceError(f"Belt series overflowed after {m + 1} terms!")
        small = (
            (np.abs(term) <= cfg.rel_tol * np.abs(regular))
            & (np.abs(term * e) <= cfg.rel_tol * (np.abs(logSum) + np.abs(regular)))
            & (np.abs(ratio) < 1)
        )
        smallCount = np.where(small, smallCount + 1, 0)
        if np.all(smallCount >= 3):
            break
    else:
        raise ConvergenceError(
            f"Belt series did not converge within {cfg.max_terms} terms (largest argument s = {np.max(ss)})!"
        )

    logS = np.log(ss)
    logarithmic = logSum + regular * logS
    logarithmicPrime = logSumPrime + regularPrime * logS + regular / ss
    if kind is BeltKind.SC and singular:
        logarithmic = logarithmic + 1 / ((0.25 - zSq) * ss)
        logarithmicPrime = logarithmicPrime - 1 / ((0.25 - zSq) * ss**2)
    return regular, regularPrime, logarithmic, logarithmicPrime


def _as_output(value):
    return float(value) if np.ndim(value) == 0 else value


def belt_pair(
    z_sq: ArrayLike,
    theta: ArrayLike,
    kind: BeltKind,
    cfg: SeriesConfig = DEFAULT_SERIES_CONFIG,
    singular: bool = True,
) -> BasisPair:
    """
    Regular and logarithmic radial solutions with theta-derivatives: P and Q for SP, the multiplied forms
    F sin(theta) and H sin(theta) for SC. Without singular, H omits its pole term, see _pole_term.
    """
    angle = np.asarray(theta, dtype=float)
    if np.any(angle <= 0) or np.any(angle >= math.pi):
        raise DomainError("Belt basis functions are only evaluated for theta in (0, pi)!")
    s = np.sin(angle / 2) ** 2
    regular, regularPrime, logarithmic, logarithmicPrime = _log_series(z_sq, s, kind, cfg, singular)
    dsdtheta = np.sin(angle) / 2
    if kind is BeltKind.SP:
        values = (regular, regularPrime * dsdtheta, logarithmic, logarithmicPrime * dsdtheta)
    else:
        sine, cosine = np.sin(angle), np.cos(angle)
        values = (
            regular * sine,
            regularPrime * dsdtheta * sine + regular * cosine,
            logarithmic * sine,
            logarithmicPrime * dsdtheta * sine + logarithmic * cosine,
        )
    return BasisPair(*(_as_output(value) for value in values))


def belt_P(z_sq: ArrayLike, theta: ArrayLike, cfg: SeriesConfig = DEFAULT_SERIES_CONFIG) -> ArrayLike:
    return belt_pair(z_sq, theta, BeltKind.SP, cfg).regular


def belt_P_prime(z_sq: ArrayLike, theta: ArrayLike, cfg: SeriesConfig = DEFAULT_SERIES_CONFIG) -> ArrayLike:
    return belt_pair(z_sq, theta, BeltKind.SP, cfg).regular_prime


def belt_Q(z_sq: ArrayLike, theta: ArrayLike, cfg: SeriesConfig = DEFAULT_SERIES_CONFIG) -> ArrayLike:
    return belt_pair(z_sq, theta, BeltKind.SP, cfg).logarithmic


def belt_Q_prime(z_sq: ArrayLike, theta: ArrayLike, cfg: SeriesConfig = DEFAULT_SERIES_CONFIG) -> ArrayLike:
    return belt_pair(z_sq, theta, BeltKind.SP, cfg).logarithmic_prime


def belt_F(z_sq: ArrayLike, theta: ArrayLike, cfg: SeriesConfig = DEFAULT_SERIES_CONFIG) -> ArrayLike:
    return _as_output(_log_series(z_sq, np.sin(np.asarray(theta, dtype=float) / 2) ** 2, BeltKind.SC, cfg)[0])


def belt_H(z_sq: ArrayLike, theta: ArrayLike, cfg: SeriesConfig = DEFAULT_SERIES_CONFIG) -> ArrayLike:
    return _as_output(_log_series(z_sq, np.sin(np.asarray(theta, dtype=float) / 2) ** 2, BeltKind.SC, cfg)[2])


def belt_F_tilde_prime(z_sq: ArrayLike, theta: ArrayLike, cfg: SeriesConfig = DEFAULT_SERIES_CONFIG) -> ArrayLike:
    return belt_pair(z_sq, theta, BeltKind.SC, cfg).regular_prime


def belt_H_tilde_prime(z_sq: ArrayLike, theta: ArrayLike, cfg: SeriesConfig = DEFAULT_SERIES_CONFIG) -> ArrayLike:
    return belt_pair(z_sq, theta, BeltKind.SC, cfg).logarithmic_prime


def basis_ode_residual(
    z_sq: float,
    theta: float,
    kind: BeltKind,
    logarithmic: bool,
    step: float = 1e-4,
    cfg: SeriesConfig = DEFAULT_SERIES_CONFIG,
) -> float:
    """
    Relative residual of (sin(theta) w')' / sin(theta) + (z^2 - 1/4) w [- w / sin^2(theta) for SC] = 0 for one
    basis function w with the derivatives approximated by central differences.
    """
    angles = np.array([theta - step, theta, theta + step])
    pair = belt_pair(z_sq, angles, kind, cfg)
    w = np.asarray(pair.logarithmic if logarithmic else pair.regular)
    second = (w[2] - 2 * w[1] + w[0]) / step**2
    first = (w[2] - w[0]) / (2 * step)
    terms = [second, first / math.tan(theta), (z_sq - 0.25) * w[1]]
    if kind is BeltKind.SC:
        terms.append(-w[1] / math.sin(theta) ** 2)
    return abs(sum(terms)) / sum(abs(x) for x in terms)


def belt_basis(
    kappa: float, lam: ArrayLike, kind: BeltKind, theta: float, cfg: SeriesConfig = DEFAULT_SERIES_CONFIG
) -> np.ndarray:
    """
    Returns an array of shape (4, 2, *lam.shape) holding value and theta-derivative of the four basis functions
    regular(gamma_+), mixed, regular(gamma_-), logarithmic(gamma_-) with gamma_+-^2 = 1/4 +- mu.

    Both logarithmic solutions share their leading term for small theta: ln(s) for SP and the pole
    -+1 / (mu s) for SC. The mixed column Q_+ - Q_- (SP) or H_+ + H_- (SC) cancels it, so that the columns stay
    independent on belts with a tiny inner circle. For SC, the poles cancel exactly and are left out.
    """
    mu = np.asarray(lam, dtype=float) ** 2 / kappa
    if kind is BeltKind.SP:
        plus = belt_pair(0.25 + mu, theta, kind, cfg)
        minus = belt_pair(0.25 - mu, theta, kind, cfg)
        mixed = [plus.logarithmic - minus.logarithmic, plus.logarithmic_prime - minus.logarithmic_prime]
    else:
        plus = belt_pair(0.25 + mu, theta, kind, cfg, singular=False)
        minus = belt_pair(0.25 - mu, theta, kind, cfg, singular=False)
        mixed = [plus.logarithmic + minus.logarithmic, plus.logarithmic_prime + minus.logarithmic_prime]
        pole, polePrime = _pole_term(0.25 - mu, theta)
        minus = minus._replace(
            logarithmic=minus.logarithmic + pole, logarithmic_prime=minus.logarithmic_prime + polePrime
        )
    return np.array(
        [
            [plus.regular, plus.regular_prime],
            mixed,
            [minus.regular, minus.regular_prime],
            [minus.logarithmic, minus.logarithmic_prime],
        ],
        dtype=float,
    )


def _pole_term(z_sq: ArrayLike, theta: ArrayLike) -> tuple[ArrayLike, ArrayLike]:
    """sin(theta) / ((1/4 - z^2) s) = 2 cot(theta / 2) / (1/4 - z^2) and its theta-derivative."""
    halfAngle = np.asarray(theta, dtype=float) / 2
    denominator = 0.25 - np.asarray(z_sq, dtype=float)
    return 2 / (np.tan(halfAngle) * denominator), -1 / (np.sin(halfAngle) ** 2 * denominator)


def _euclid_basis(order: int, lam: ArrayLike, x: float) -> np.ndarray:
    """
    J, Y + 2 K / pi, I, K of the given order at lam x with x-derivatives, same layout as belt_basis. The mixed
    column cancels the common ln(x) (order 0) or 1 / x (order 1) behavior of Y and K for small x.
    """
    lams = np.asarray(lam, dtype=float)
    argument = lams * x
    if np.any(argument < 1e-8):
        raise DomainError("Euclidean belt determinants overflow for lambda r < 1e-8!")
    mixed = scipy.special.yn(order, argument) + 2 / math.pi * scipy.special.kn(order, argument)
    mixedPrime = scipy.special.yvp(order, argument) + 2 / math.pi * scipy.special.kvp(order, argument)
    return np.array(
        [
            [scipy.special.jv(order, argument), lams * scipy.special.jvp(order, argument)],
            [mixed, lams * mixedPrime],
            [scipy.special.iv(order, argument), lams * scipy.special.ivp(order, argument)],
            [scipy.special.kn(order, argument), lams * scipy.special.kvp(order, argument)],
        ],
        dtype=float,
    )


def _scaled_matrix(inner: np.ndarray, outer: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """
    Stacks the basis arrays at both circles into matrices of shape (..., 4, 4) with rows value and derivative at
    the inner and the outer circle, divides each column by its largest magnitude and then each row by its largest
    magnitude. Only the column scales enter the nullspace coefficients.
    """
    stacked = np.concatenate([inner, outer], axis=1)  # (column, row, ...)
    matrix = np.moveaxis(stacked, (0, 1), (-1, -2))
    scales = np.max(np.abs(matrix), axis=-2)
    if np.any(scales == 0) or not np.all(np.isfinite(scales)):
        raise ConvergenceError("Belt boundary matrix has a vanishing or non-finite column!")
    matrix = matrix / scales[..., np.newaxis, :]
    rowScales = np.max(np.abs(matrix), axis=-1, keepdims=True)
    if np.any(rowScales == 0):
        raise ConvergenceError("Belt boundary matrix has a vanishing row!")
    return matrix / rowScales, scales


def _check_resolved(matrices: np.ndarray, what: str) -> None:
    """
    Raises if all given boundary matrices, taken next to a computed tone, are numerically singular. Their
    determinants are then rounding noise and so is any sign change found in them.
    """
    singular = np.linalg.svd(matrices, compute_uv=False)
    ratio = float(np.max(singular[..., -1] / singular[..., 0]))
    if not ratio >= _CONDITION_FLOOR:
        raise ConvergenceError(
            f"Boundary matrices around {what} are numerically singular (smallest relative singular value "
            f"{ratio:.3g}), the determinant cannot be resolved!"
        )


def boundary_matrix(
    kappa: float, belt: BeltSpec, lam: ArrayLike, kind: BeltKind, cfg: SeriesConfig = DEFAULT_SERIES_CONFIG
) -> tuple[np.ndarray, np.ndarray]:
    """Column-scaled boundary matrix of the clamped conditions and the column scales."""
    belt.check(kappa)
    if np.any(np.asarray(lam) <= 0):
        raise DomainError("Belt determinants are only evaluated for lambda > 0!")
    root = math.sqrt(kappa)
    return _scaled_matrix(
        belt_basis(kappa, lam, kind, root * belt.r, cfg), belt_basis(kappa, lam, kind, root * belt.R, cfg)
    )


def euclid_boundary_matrix(belt: BeltSpec, lam: ArrayLike, kind: BeltKind) -> tuple[np.ndarray, np.ndarray]:
    if np.any(np.asarray(lam) <= 0):
        raise DomainError("Belt determinants are only evaluated for lambda > 0!")
    order = 0 if kind is BeltKind.SP else 1
    return _scaled_matrix(_euclid_basis(order, lam, belt.r), _euclid_basis(order, lam, belt.R))


def _determinant(matrix: np.ndarray) -> ArrayLike:
    return _as_output(np.linalg.det(matrix))


def det_sp(kappa: float, belt: BeltSpec, lam: ArrayLike, cfg: SeriesConfig = DEFAULT_SERIES_CONFIG) -> ArrayLike:
    return _determinant(boundary_matrix(kappa, belt, lam, BeltKind.SP, cfg)[0])


def det_sc(kappa: float, belt: BeltSpec, lam: ArrayLike, cfg: SeriesConfig = DEFAULT_SERIES_CONFIG) -> ArrayLike:
    return _determinant(boundary_matrix(kappa, belt, lam, BeltKind.SC, cfg)[0])


def det_sp_euclid(r: float, R: float, lam: ArrayLike) -> ArrayLike:
    return _determinant(euclid_boundary_matrix(BeltSpec(r, R), lam, BeltKind.SP)[0])


def det_sc_euclid(r: float, R: float, lam: ArrayLike) -> ArrayLike:
    return _determinant(euclid_boundary_matrix(BeltSpec(r, R), lam, BeltKind.SC)[0])


def smallest_zero(
    function: Callable[[ArrayLike], ArrayLike],
    lo: float,
    hi: float,
    what: str = 'the smallest zero',
    growth: float = _SCAN_GROWTH,
    rtol: float = _ROOT_RTOL,
) -> float:
    """
    Smallest sign change of a vectorized function on [lo, hi] located on the geometric grid lo * growth^k and
    refined with Brent's method.
    """
    if not 0 < lo < hi:
        raise DomainError(f"Scan window must satisfy 0 < lo < hi but got [{lo}, {hi}]!")
    start = lo
    previous: Optional[tuple[float, float]] = None
    while start <= hi:
        grid = start * growth ** np.arange(_SCAN_CHUNK)
        values = np.atleast_1d(np.asarray(function(grid), dtype=float))
        if previous is not None:
            grid = np.concatenate([[previous[0]], grid])
            values = np.concatenate([[previous[1]], values])
        changes = sign_changes(values)
        if changes:
            index = changes[0]
            return bracketed_root(
                lambda x: float(function(x)),
                float(grid[index]),
                float(grid[next_nonzero(values, index)]),
                what=what,
                rtol=rtol,
            )
        previous = (float(grid[-1]), float(values[-1]))
        start = float(grid[-1]) * growth
    raise ConvergenceError(f"No sign change for {what} in the scan window [{lo}, {hi}]!")


def _scan_window(belt: BeltSpec) -> tuple[float, float]:
    width = belt.R - belt.r
    return 1e-3 * math.pi / width, 20 * math.pi / width


def belt_tone(kappa: float, belt: BeltSpec, kind: BeltKind, cfg: SeriesConfig = DEFAULT_SERIES_CONFIG) -> float:
    determinant = det_sp if kind is BeltKind.SP else det_sc
    what = f"the {kind.value} belt tone for r = {belt.r}, R = {belt.R}, kappa = {kappa}"
    lam = smallest_zero(lambda x: determinant(kappa, belt, x, cfg), *_scan_window(belt), what=what)
    _check_resolved(boundary_matrix(kappa, belt, lam * _NEIGHBORS, kind, cfg)[0], what)
    return lam


def belt_tone_euclid(belt: BeltSpec, kind: BeltKind) -> float:
    determinant = det_sp_euclid if kind is BeltKind.SP else det_sc_euclid
    what = f"the Euclidean {kind.value} annulus tone for r = {belt.r}, R = {belt.R}"
    lam = smallest_zero(lambda x: determinant(belt.r, belt.R, x), *_scan_window(belt), what=what)
    _check_resolved(euclid_boundary_matrix(belt, lam * _NEIGHBORS, kind)[0], what)
    return lam


def _classify(lambdaSp: float, lambdaSc: float) -> BeltSolution:
    tolerance = 10 * _ROOT_RTOL * max(lambdaSp, lambdaSc)
    if abs(lambdaSp - lambdaSc) <= tolerance:
        regime = Regime.INDETERMINATE
    elif lambdaSp < lambdaSc:
        regime = Regime.FIXED_SIGN
    else:
        regime = Regime.SIGN_CHANGING
    return BeltSolution(lambda_sp=lambdaSp, lambda_sc=lambdaSc, regime=regime, tolerance=tolerance)


def belt_tones(kappa: float, belt: BeltSpec, cfg: SeriesConfig = DEFAULT_SERIES_CONFIG) -> BeltSolution:
    """Smallest tones with fixed-sign and with sign-changing eigenfunction and which of them is the fundamental."""
    belt.check(kappa)
    solution = _classify(belt_tone(kappa, belt, BeltKind.SP, cfg), belt_tone(kappa, belt, BeltKind.SC, cfg))
    logger.debug("Belt tones for r = %s, R = %s, kappa = %s: %s", belt.r, belt.R, kappa, solution)
    return solution


def belt_tones_euclid(belt: BeltSpec) -> BeltSolution:
    return _classify(belt_tone_euclid(belt, BeltKind.SP), belt_tone_euclid(belt, BeltKind.SC))


def _tone_difference(r: float) -> float:
    belt = BeltSpec(r, 1.0)
    return belt_tone_euclid(belt, BeltKind.SP) - belt_tone_euclid(belt, BeltKind.SC)


def cds_constant() -> CdsResult:
    """
    Critical ratio R / r of the Euclidean annulus at which the fixed-sign and the sign-changing tones coincide.
    Narrower annuli have a fixed-sign fundamental mode.
    """
    r = bracketed_root(_tone_difference, 1 / 900, 1 / 600, what="the critical inner radius", rtol=1e-12)
    lambda2 = belt_tone_euclid(BeltSpec(r, 1.0), BeltKind.SP)
    ratio = 1 / r
    return CdsResult(c_cds=ratio, lambda1_c=lambda2 / ratio, lambda2_c=lambda2)


class BeltProfile:
    """
    First eigenfunction of the given kind on a belt, normalized to a maximum magnitude of 1. The coefficients of
    the basis functions span the nullspace of the boundary matrix at the tone.
    """

    def __init__(
        self,
        kappa: float,
        belt: BeltSpec,
        kind: BeltKind,
        cfg: SeriesConfig = DEFAULT_SERIES_CONFIG,
        lam: Optional[float] = None,
        resolution: int = 1024,
    ):
        self.kappa = kappa
        self.belt = belt
        self.kind = kind
        self.cfg = cfg
        self.lam = belt_tone(kappa, belt, kind, cfg) if lam is None else lam

        matrix, scales = boundary_matrix(kappa, belt, self.lam, kind, cfg)
        _, singular, rightVectors = np.linalg.svd(matrix)
        if singular[-1] > _NULLSPACE_TOLERANCE * singular[0]:
            raise NullspaceError(
                f"Boundary matrix at lambda = {self.lam} is regular (singular values {singular.tolist()})!"
            )
        if singular[-2] < _RANK_TOLERANCE * singular[0]:
            raise NullspaceError(
                f"Boundary matrix at lambda = {self.lam} has a nullspace of dimension > 1 "
                f"(singular values {singular.tolist()})!"
            )
        self.coefficients = rightVectors[-1] / scales

        root = math.sqrt(kappa)
        self.angles = (root * belt.r, root * belt.R)
        samples = self._radial(np.linspace(*self.angles, resolution))
        self.scale = float(samples[np.argmax(np.abs(samples))])

    def _radial(self, theta: np.ndarray) -> np.ndarray:
        return np.tensordot(self.coefficients, belt_basis(self.kappa, self.lam, self.kind, theta, self.cfg)[:, 0], 1)

    def radial(self, theta: ArrayLike) -> ArrayLike:
        angles = np.asarray(theta, dtype=float)
        lower, upper = self.angles
        if np.any(angles < lower * (1 - 1e-12)) or np.any(angles > upper * (1 + 1e-12)):
            raise DomainError(f"Profile angles must be in [{lower}, {upper}]!")
        return _as_output(self._radial(np.clip(angles, lower, upper)) / self.scale)

    def radial_prime(self, theta: ArrayLike) -> ArrayLike:
        """theta-derivative of the normalized radial part."""
        derivatives = belt_basis(self.kappa, self.lam, self.kind, np.asarray(theta, dtype=float), self.cfg)[:, 1]
        return _as_output(np.tensordot(self.coefficients, derivatives, 1) / self.scale)

    def __call__(self, theta: ArrayLike, xi: ArrayLike = math.pi / 2) -> ArrayLike:
        radial = self.radial(theta)
        if self.kind is BeltKind.SP:
            return radial
        return _as_output(np.asarray(radial) * np.sin(np.asarray(xi, dtype=float)))


def belt_eigenprofile(
    kappa: float,
    belt: BeltSpec,
    kind: BeltKind,
    theta: ArrayLike,
    xi: ArrayLike = math.pi / 2,
    cfg: SeriesConfig = DEFAULT_SERIES_CONFIG,
) -> ArrayLike:
    return BeltProfile(kappa, belt, kind, cfg)(theta, xi)
