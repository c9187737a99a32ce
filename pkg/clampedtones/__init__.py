"""Clamped Tones

This is the command line frontend for clampedtonescore.
It is normally not intended to be used as a library.

The installed clampedtones script will load this module and call its 'cli' function,
which could also be done programmatically.

Example:

    from clampedtones.cli import cli

    cli(["tone", "--n", "2", "--kappa", "1", "--L", "0.4", "--format", "json"])
"""

from .version import __version__
