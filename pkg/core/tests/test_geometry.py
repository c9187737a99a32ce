# pylint: disable=wrong-import-position

import math
import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from clampedtonescore.geometry import (
    BeltSpec,
    CapSpec,
    L_of_alpha,
    SphereParams,
    alpha_of_L,
    alpha_of_volume_fraction,
    cap_volume,
    cap_volume_quadrature,
    half_cap_alpha,
    half_cap_radius,
    unit_ball_volume,
    volume_fraction,
)
from clampedtonescore.utils import DomainError

pytestmark = pytest.mark.order(1)


def test_sphere_params():
    sphere = SphereParams(2, 4.0)
    assert sphere.sqrt_kappa == 2.0
    assert sphere.max_radius == pytest.approx(math.pi / 2)
    assert sphere.volume == pytest.approx(math.pi)

    assert SphereParams(3, 1.0).volume == pytest.approx(2 * math.pi**2)
    assert SphereParams(4, 1.0).volume == pytest.approx(8 * math.pi**2 / 3)

    for n, kappa in [(1, 1.0), (2.5, 1.0), (2, 0.0), (2, -1.0), (2, math.inf), (2, math.nan)]:
        with pytest.raises(DomainError):
            SphereParams(n, kappa)


def test_unit_ball_volume():
    assert unit_ball_volume(2) == pytest.approx(math.pi)
    assert unit_ball_volume(3) == pytest.approx(4 * math.pi / 3)
    assert unit_ball_volume(4) == pytest.approx(math.pi**2 / 2)


def test_alpha():
    sphere = SphereParams(2, 1.0)
    assert alpha_of_L(sphere, 0.4) == pytest.approx(math.sin(0.2) ** 2, rel=1e-15)
    assert alpha_of_L(sphere, 0.4) == pytest.approx(0.0394695, rel=1e-6)
    assert alpha_of_L(sphere, math.pi) == 1.0
    assert alpha_of_L(SphereParams(3, 4.0), math.pi / 4) == pytest.approx(0.5)

    for L in [1e-4, 0.3, 1.0, 2.0, 3.1]:
        assert L_of_alpha(sphere, alpha_of_L(sphere, L)) == pytest.approx(L, rel=1e-12)

    for L in [0.0, -1.0, math.pi + 1e-9]:
        with pytest.raises(DomainError):
            alpha_of_L(sphere, L)
    for alpha in [0.0, 1.5]:
        with pytest.raises(DomainError):
            L_of_alpha(sphere, alpha)


def test_cap_volume_closed_forms():
    assert cap_volume(SphereParams(2, 1.0), math.pi) == pytest.approx(4 * math.pi)
    assert cap_volume(SphereParams(2, 1.0), math.pi / 2) == pytest.approx(2 * math.pi)
    assert cap_volume(SphereParams(3, 1.0), math.pi) == pytest.approx(2 * math.pi**2)

    for L in [0.1, 0.7, 2.5]:
        assert cap_volume(SphereParams(3, 1.0), L) == pytest.approx(math.pi * (2 * L - math.sin(2 * L)), rel=1e-12)

    # Scaling with the curvature: V_kappa(L) = kappa^(-n/2) V_1(sqrt(kappa) L)
    assert cap_volume(SphereParams(4, 4.0), 0.5) == pytest.approx(cap_volume(SphereParams(4, 1.0), 1.0) / 16)


@pytest.mark.parametrize('n', [2, 3, 4, 5, 6, 7])
def test_cap_volume_quadrature(n):
    sphere = SphereParams(n, 1.0)
    for L in [0.05, 0.5, 1.5, 3.0]:
        assert cap_volume(sphere, L) == pytest.approx(cap_volume_quadrature(sphere, L), rel=1e-8)
    assert cap_volume(sphere, math.pi) == pytest.approx(sphere.volume, rel=1e-12)


def test_cap_volume_is_increasing():
    for n in [2, 3, 5, 10]:
        sphere = SphereParams(n, 1.0)
        volumes = [cap_volume(sphere, L) for L in np.linspace(0.01, math.pi, 100)]
        assert all(a < b for a, b in zip(volumes, volumes[1:]))


def test_volume_fraction_inverse():
    for n in [2, 3, 4, 7, 50]:
        assert volume_fraction(n, 0.5) == pytest.approx(0.5)
        for fraction in [1e-6, 0.01, 0.3, 0.9]:
            alpha = alpha_of_volume_fraction(n, fraction)
            assert volume_fraction(n, alpha) == pytest.approx(fraction, rel=1e-10)

    assert alpha_of_volume_fraction(2, 0.25) == 0.25
    with pytest.raises(DomainError):
        alpha_of_volume_fraction(3, 1.5)


def test_half_cap():
    sphere = SphereParams(2, 1.0)
    for L in [0.2, 1.0, 3.0]:
        assert half_cap_alpha(sphere, L) == pytest.approx(alpha_of_L(sphere, L) / 2, rel=1e-14)
    assert half_cap_radius(sphere, math.pi) == pytest.approx(math.pi / 2)
    assert half_cap_radius(SphereParams(5, 1.0), math.pi) == pytest.approx(math.pi / 2)

    for n in [3, 4, 6]:
        sphere = SphereParams(n, 1.0)
        for L in [0.3, 1.7, 3.0]:
            assert cap_volume(sphere, half_cap_radius(sphere, L)) == pytest.approx(cap_volume(sphere, L) / 2)


@pytest.mark.parametrize('n', [2, 3, 4, 10])
def test_half_cap_radius_small_caps(n):
    sphere = SphereParams(n, 1.0)
    L = 1e-3
    assert L / (2 ** (1 / n) * half_cap_radius(sphere, L)) == pytest.approx(1, abs=1e-4)


def test_half_cap_radius_is_increasing():
    sphere = SphereParams(4, 1.0)
    radii = [half_cap_radius(sphere, L) for L in np.linspace(0.05, math.pi, 50)]
    assert all(a < b for a, b in zip(radii, radii[1:]))
    assert all(0 < L0 < L for L0, L in zip(radii, np.linspace(0.05, math.pi, 50)))


def test_cap_spec():
    sphere = SphereParams(2, 1.0)
    cap = CapSpec.from_radius(sphere, 0.4)
    assert cap.L == 0.4
    assert cap.alpha == pytest.approx(math.sin(0.2) ** 2)
    assert cap.L0 == pytest.approx(2 * math.asin(math.sqrt(cap.alpha / 2)))

    for L in [0.0, math.pi, 4.0]:
        with pytest.raises(DomainError):
            CapSpec.from_radius(sphere, L)
    with pytest.raises(DomainError):
        CapSpec.from_radius(SphereParams(3, 4.0), 1.6)


def test_belt_spec():
    belt = BeltSpec(0.5, 1.0)
    belt.check(1.0)

    for r, R in [(0.0, 1.0), (1.0, 0.5), (0.5, 0.5), (-0.1, 1.0)]:
        with pytest.raises(DomainError):
            BeltSpec(r, R)

    with pytest.raises(DomainError):
        BeltSpec(0.5, 3.5).check(1.0)
    with pytest.raises(DomainError):
        belt.check(0.0)
    with pytest.raises(DomainError):
        BeltSpec(0.5, 1.6).check(4.0)
