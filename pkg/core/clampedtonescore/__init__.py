"""Clamped Tones Core

This is the numerical backend of clampedtones. It is intended to be used as a library.

It computes fundamental tones of clamped plates on spherical caps and belts of the model sphere
with constant curvature, together with the constants derived from them: the coupled two-cap problem,
the volume thresholds of the Rayleigh gate, the large-cap spectral gaps, the flat-limit ratios w_n and
the critical Coffman-Duffin-Schaffer ratio of annuli.

Example:

    from clampedtonescore.geometry import CapSpec, SphereParams
    from clampedtonescore.tone import cap_tone

    sphere = SphereParams(n=3, kappa=1.0)
    solution = cap_tone(sphere, CapSpec.from_radius(sphere, 0.4))
    print(solution.lam, solution.Lambda)
"""

from .version import __version__
