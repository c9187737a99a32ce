# pylint: disable=wrong-import-position
# pylint: disable=protected-access

import math
import os
import sys

import numpy as np
import pytest
import scipy.special

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from clampedtonescore.belt import (
    BeltKind,
    BeltProfile,
    Regime,
    _check_resolved,
    _classify,
    basis_ode_residual,
    belt_eigenprofile,
    belt_F,
    belt_P,
    belt_P_prime,
    belt_Q,
    belt_pair,
    belt_tone,
    belt_tone_euclid,
    belt_tones,
    belt_tones_euclid,
    cds_constant,
    det_sc,
    det_sp,
    det_sp_euclid,
    smallest_zero,
)
from clampedtonescore.geometry import BeltSpec, CapSpec, SphereParams
from clampedtonescore.tone import cap_tone
from clampedtonescore.utils import ConvergenceError, DomainError, NullspaceError

pytestmark = pytest.mark.order(4)


def test_legendre_oracles():
    nu = 0.7
    zSq = (nu + 0.5) ** 2
    for theta in [0.2, 1.0, 2.5]:
        assert belt_P(zSq, theta) == pytest.approx(scipy.special.lpmv(0, nu, math.cos(theta)), rel=1e-10)
        assert belt_P_prime(zSq, theta) == pytest.approx(scipy.special.lpmv(1, nu, math.cos(theta)), rel=1e-9)

        associated = scipy.special.lpmv(1, nu, math.cos(theta))
        regular = belt_pair(zSq, theta, BeltKind.SC).regular
        assert regular == pytest.approx(-2 * associated / (nu * (nu + 1)), rel=1e-9)
        assert belt_F(zSq, theta) * math.sin(theta) == pytest.approx(regular)


def test_legendre_polynomials():
    theta = np.linspace(0.1, 3.0, 7)
    assert belt_P(2.25, theta) == pytest.approx(np.cos(theta), rel=1e-6, abs=1e-8)
    assert belt_P(6.25, theta) == pytest.approx((3 * np.cos(theta) ** 2 - 1) / 2, rel=1e-6, abs=1e-8)


@pytest.mark.parametrize('kind', [BeltKind.SP, BeltKind.SC])
def test_basis_ode_residual(kind):
    for zSq in [0.1, 1.44, 2.25, 4.25, -3.75]:
        for theta in [0.3, 1.5, 2.4]:
            for logarithmic in [False, True]:
                assert basis_ode_residual(zSq, theta, kind, logarithmic) < 1e-5


def test_belt_pair_domain():
    for theta in [0.0, math.pi, -0.5]:
        with pytest.raises(DomainError):
            belt_pair(1.0, theta, BeltKind.SP)


def test_smallest_zero():
    assert smallest_zero(np.sin, 1.0, 10.0) == pytest.approx(math.pi, rel=1e-12)
    assert smallest_zero(np.cos, 0.1, 10.0) == pytest.approx(math.pi / 2, rel=1e-12)

    with pytest.raises(ConvergenceError, match=r'\[1\.0, 2\.0\]'):
        smallest_zero(lambda x: x + 1, 1.0, 2.0)
    with pytest.raises(DomainError):
        smallest_zero(np.sin, 2.0, 1.0)


def test_classify():
    assert _classify(1.0, 2.0).regime is Regime.FIXED_SIGN
    assert _classify(2.0, 1.0).regime is Regime.SIGN_CHANGING
    assert _classify(1.0, 1.0).regime is Regime.INDETERMINATE
    assert _classify(1.0, 1.0 + 1e-13).regime is Regime.INDETERMINATE
    assert Regime.FIXED_SIGN.value == 'FixedSign'


def test_euclidean_narrow_annulus():
    # A narrow annulus behaves like a clamped beam of the same width.
    solution = belt_tones_euclid(BeltSpec(0.9, 1.0))
    assert solution.lambda_sp == pytest.approx(4.730041 / 0.1, rel=2e-2)
    assert solution.lambda_sp < solution.lambda_sc
    assert solution.regime is Regime.FIXED_SIGN


def test_euclidean_wide_annulus():
    solution = belt_tones_euclid(BeltSpec(1e-4, 1.0))
    assert solution.regime is Regime.SIGN_CHANGING
    assert solution.lambda_sc < solution.lambda_sp


def test_euclidean_scaling():
    unit = belt_tone_euclid(BeltSpec(0.5, 1.0), BeltKind.SC)
    assert belt_tone_euclid(BeltSpec(1.0, 2.0), BeltKind.SC) == pytest.approx(unit / 2, rel=1e-10)


def test_flat_limit():
    belt = BeltSpec(0.5, 1.0)
    euclidean = belt_tones_euclid(belt)
    spherical = belt_tones(1e-6, belt)
    assert spherical.lambda_sp == pytest.approx(euclidean.lambda_sp, rel=1e-3)
    assert spherical.lambda_sc == pytest.approx(euclidean.lambda_sc, rel=1e-3)
    assert spherical.regime is euclidean.regime

    lam = euclidean.lambda_sp
    assert det_sp_euclid(belt.r, belt.R, lam * (1 - 1e-6)) * det_sp_euclid(belt.r, belt.R, lam * (1 + 1e-6)) < 0


def test_spherical_belt():
    belt = BeltSpec(0.5, 1.0)
    solution = belt_tones(1.0, belt)
    assert solution.regime is Regime.FIXED_SIGN
    assert solution.lambda_sp < solution.lambda_sc
    assert solution.tolerance > 0

    lam = belt_tone(1.0, belt, BeltKind.SP)
    assert lam == solution.lambda_sp
    assert det_sp(1.0, belt, lam * (1 - 1e-6)) * det_sp(1.0, belt, lam * (1 + 1e-6)) < 0

    with pytest.raises(DomainError):
        belt_tones(1.0, BeltSpec(1.0, 4.0))
    with pytest.raises(DomainError):
        det_sp(1.0, belt, 0.0)


@pytest.mark.parametrize('x', [0.5, 1.5])
def test_flat_limit_basis(x):
    # theta = sqrt(kappa) x with lambda = 1 and kappa -> 0
    root = 1e-3
    theta = root * x
    plus = 0.25 + 1 / root**2
    minus = 0.25 - 1 / root**2

    assert belt_P(plus, theta) == pytest.approx(scipy.special.j0(x), rel=1e-4)
    assert belt_P(minus, theta) == pytest.approx(scipy.special.i0(x), rel=1e-4)
    assert belt_Q(plus, theta) == pytest.approx(math.pi * scipy.special.y0(x), rel=1e-4)
    assert belt_Q(minus, theta) == pytest.approx(-2 * scipy.special.k0(x), rel=1e-4)

    assert belt_pair(plus, theta, BeltKind.SC).regular / root == pytest.approx(2 * scipy.special.j1(x), rel=1e-4)
    assert belt_pair(minus, theta, BeltKind.SC).regular / root == pytest.approx(2 * scipy.special.i1(x), rel=1e-4)
    assert belt_pair(plus, theta, BeltKind.SC).logarithmic / root == pytest.approx(
        2 * math.pi * scipy.special.y1(x), rel=1e-4
    )
    assert belt_pair(minus, theta, BeltKind.SC).logarithmic / root == pytest.approx(
        4 * scipy.special.k1(x), rel=1e-4
    )


def test_flat_limit_sequence():
    belt = BeltSpec(0.5, 1.0)
    solutions = [belt_tones(kappa, belt) for kappa in [1e-2, 1e-4, 1e-6]]
    for coarse, fine in zip(solutions, solutions[1:]):
        assert fine.lambda_sp == pytest.approx(coarse.lambda_sp, rel=1e-2)
        assert fine.lambda_sc == pytest.approx(coarse.lambda_sc, rel=1e-2)


@pytest.mark.parametrize(
    'r, regime, lambdaSp, lambdaSc',
    [(1e-2, Regime.FIXED_SIGN, 4.7879, 4.8681), (1e-3, Regime.SIGN_CHANGING, 4.7688, 4.7613)],
)
def test_spherical_regimes(r, regime, lambdaSp, lambdaSc):
    solution = belt_tones(1e-4 * math.pi**2, BeltSpec(r, 1.0))
    assert solution.regime is regime
    assert solution.lambda_sp == pytest.approx(lambdaSp, rel=1e-3)
    assert solution.lambda_sc == pytest.approx(lambdaSc, rel=1e-3)


@pytest.mark.parametrize(
    'ratio, regime',
    [(600, Regime.FIXED_SIGN), (700, Regime.FIXED_SIGN), (800, Regime.SIGN_CHANGING), (900, Regime.SIGN_CHANGING)],
)
def test_euclidean_regimes_around_cds_constant(ratio, regime):
    assert belt_tones_euclid(BeltSpec(1 / ratio, 1.0)).regime is regime


@pytest.mark.parametrize('kappa', [1.0, 0.25])
def test_punctured_cap(kappa):
    sphere = SphereParams(2, kappa)
    cap = cap_tone(sphere, CapSpec.from_radius(sphere, 1.0)).lam
    larger = belt_tones(kappa, BeltSpec(1e-5, 1.0))
    smaller = belt_tones(kappa, BeltSpec(1e-6, 1.0))

    # Tones decrease with growing domain and the cap contains every punctured cap.
    for solution in [larger, smaller]:
        assert solution.regime is Regime.SIGN_CHANGING
    assert cap < smaller.lambda_sc <= larger.lambda_sc * (1 + 1e-9)
    assert cap < smaller.lambda_sp <= larger.lambda_sp * (1 + 1e-9)

    lam = smaller.lambda_sc
    belt = BeltSpec(1e-6, 1.0)
    assert det_sc(kappa, belt, lam * (1 - 1e-6)) * det_sc(kappa, belt, lam * (1 + 1e-6)) < 0


def test_singular_boundary_matrices_are_rejected():
    parallel = np.eye(4)
    parallel[:, 1] = parallel[:, 0]
    with pytest.raises(ConvergenceError):
        _check_resolved(np.array([parallel, parallel]), 'a tone')
    _check_resolved(np.array([parallel, np.eye(4)]), 'a tone')


def test_cds_constant():
    result = cds_constant()
    assert result.c_cds == pytest.approx(762.3264, abs=0.5)
    assert result.lambda2_c == pytest.approx(4.769102, abs=1e-3)
    assert result.lambda1_c == pytest.approx(result.lambda2_c / result.c_cds)
    assert result.lambda1_c == pytest.approx(6.2557e-3, abs=5e-6)


@pytest.mark.parametrize('kind', [BeltKind.SP, BeltKind.SC])
def test_belt_profile(kind):
    belt = BeltSpec(0.5, 1.0)
    profile = BeltProfile(1.0, belt, kind, resolution=256)
    lower, upper = profile.angles
    assert (lower, upper) == (0.5, 1.0)

    grid = np.linspace(lower, upper, 101)
    values = profile.radial(grid)
    assert np.max(np.abs(values)) == pytest.approx(1, abs=1e-3)
    assert profile.radial(lower) == pytest.approx(0, abs=1e-6)
    assert profile.radial(upper) == pytest.approx(0, abs=1e-6)

    slopes = np.abs(profile.radial_prime(grid))
    assert abs(profile.radial_prime(lower)) < 1e-5 * np.max(slopes)
    assert abs(profile.radial_prime(upper)) < 1e-5 * np.max(slopes)

    # The first radial profile has no interior nodes.
    assert np.all(values[1:-1] * values[50] > 0)

    with pytest.raises(DomainError):
        profile.radial(0.4)


def test_belt_profile_angular_part():
    belt = BeltSpec(0.5, 1.0)
    sc = BeltProfile(1.0, belt, BeltKind.SC)
    assert sc(0.75, 0.0) == pytest.approx(0, abs=1e-15)
    assert sc(0.75, math.pi / 2) == pytest.approx(sc.radial(0.75))
    assert sc(0.75, 3 * math.pi / 2) == pytest.approx(-sc.radial(0.75))

    sp = BeltProfile(1.0, belt, BeltKind.SP)
    assert sp(0.75, 0.0) == sp(0.75, 1.0) == sp.radial(0.75)
    assert belt_eigenprofile(1.0, belt, BeltKind.SP, 0.75) == pytest.approx(sp(0.75))


def test_belt_profile_requires_tone():
    belt = BeltSpec(0.5, 1.0)
    lam = belt_tone(1.0, belt, BeltKind.SP)
    with pytest.raises(NullspaceError):
        BeltProfile(1.0, belt, BeltKind.SP, lam=1.1 * lam)
