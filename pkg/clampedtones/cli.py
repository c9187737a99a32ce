# PYTHON_ARGCOMPLETE_OK

# Import the numerical stack as late as possible to keep argcomplete and --help fast.
# pylint: disable=import-outside-toplevel

import argparse
import contextlib
import logging
import os
import sys
from typing import Any, Optional

from clampedtonescore.utils import THREADS_ENVIRONMENT_VARIABLE, ClampedTonesError, ConvergenceError

from .CLIHelpers import parse_digits, parse_positive_float, parse_positive_int

with contextlib.suppress(ImportError):
    import argcomplete

if "_ARGCOMPLETE" not in os.environ:
    try:
        import rich_argparse

        class _RichFormatter(
            rich_argparse.ArgumentDefaultsRichHelpFormatter,
            rich_argparse.RawDescriptionRichHelpFormatter,
        ):
            def add_arguments(self, actions):
                actions = sorted(actions, key=lambda action: action.option_strings)
                super().add_arguments(actions)

    except ImportError:
        _RichFormatter = None  # type: ignore

    try:
        from rich.console import Console as RichConsole
        from rich.logging import RichHandler
        from rich.theme import Theme as RichTheme
    except ImportError:
        RichConsole = None  # type: ignore
        RichHandler = None  # type: ignore
        RichTheme = None  # type: ignore
else:
    _RichFormatter = None  # type: ignore
    RichConsole = None  # type: ignore
    RichHandler = None  # type: ignore
    RichTheme = None  # type: ignore


logger = logging.getLogger(__name__)

EXIT_SUCCESS = 0
EXIT_INVALID_ARGUMENTS = 2
EXIT_NO_CONVERGENCE = 3

COMMANDS = ('tone', 'table1', 'table2', 'table3', 'belt', 'cds', 'gap', 'wn', 'gate', 'profile')


class _CustomFormatter(argparse.ArgumentDefaultsHelpFormatter, argparse.RawDescriptionHelpFormatter):
    def add_arguments(self, actions):
        actions = sorted(actions, key=lambda action: action.option_strings)
        super().add_arguments(actions)


class PrintVersionAction(argparse.Action):
    def __call__(self, parser, namespace, values, option_string=None):
        from .dependencies import print_versions

        print_versions()
        parser.exit()


def _create_common_parser() -> argparse.ArgumentParser:
    """Options shared by all subcommands. They must follow the subcommand name."""
    parser = argparse.ArgumentParser(add_help=False)
    outputGroup = parser.add_argument_group("Output Options")
    numericsGroup = parser.add_argument_group("Numerics Options")
    advancedGroup = parser.add_argument_group("Advanced Options")

    # fmt: off
    outputGroup.add_argument(
        '--format', choices=['csv', 'json'], default='csv',
        help='Output format. CSV has a header row and LF line endings. JSON has the keys '
             'inputs, values, residuals, and meta.')

    outputGroup.add_argument(
        '--digits', type=parse_digits, default=10,
        help='Significant digits of all printed numbers, in [4, 15]. Magnitudes below 1e-3 or above 1e6 are '
             'printed with an exponent.')

    outputGroup.add_argument(
        '-o', '--output', type=str, default=None,
        help='Write the result to this file instead of stdout.')

    numericsGroup.add_argument(
        '--tol', type=parse_positive_float, default=1e-14,
        help='Relative tolerance for truncating hypergeometric series.')

    numericsGroup.add_argument(
        '--max-terms', type=parse_positive_int, default=20000,
        help='Maximum number of series terms before giving up with a convergence error.')

    numericsGroup.add_argument(
        '-P', '--threads', type=parse_positive_int, default=None,
        help='Number of worker processes for table cells and threshold scans. '
             f'Defaults to the available cores, capped by {THREADS_ENVIRONMENT_VARIABLE} if set.')

    advancedGroup.add_argument(
        '-d', '--debug', type=int, default=1,
        help='Sets the debugging level. Higher means more output. Currently, 3 is the highest.')

    advancedGroup.add_argument(
        '--color', action=argparse.BooleanOptionalAction, default=True,
        help='Enable or disable colored help and logging output.')
    # fmt: on

    return parser


def _add_command_arguments(name: str, parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("Command Options")

    # fmt: off
    if name in ('tone', 'gap', 'wn', 'gate', 'profile', 'belt', 'table1', 'table2', 'table3'):
        group.add_argument(
            '--kappa', type=parse_positive_float, default=1.0,
            help='Curvature of the model sphere.')

    if name == 'tone':
        group.add_argument('--n', type=int, required=True, help='Dimension of the sphere.')
        group.add_argument('--L', type=float, required=True, help='Geodesic cap radius in (0, pi / sqrt(kappa)).')

    elif name == 'table3':
        group.add_argument(
            '--nmax', type=int, default=10,
            help='Compute all tabulated dimensions up to this one.')
        group.add_argument(
            '--n', type=int, nargs='+', default=None,
            help='Compute exactly these dimensions. Overrides --nmax.')
        group.add_argument(
            '--grid-size', type=int, default=64,
            help='Number of radii on which the gate margin is sampled before refining sign changes.')

    elif name == 'belt':
        group.add_argument('--r', type=parse_positive_float, required=True, help='Inner geodesic radius.')
        group.add_argument('--R', type=parse_positive_float, required=True, help='Outer geodesic radius.')
        group.add_argument(
            '--euclidean', action='store_true',
            help='Compute the flat annulus with the same radii. --kappa is ignored.')

    elif name == 'gap':
        group.add_argument('--n', type=int, choices=[2, 3], required=True, help='Dimension of the sphere.')

    elif name == 'wn':
        group.add_argument('--n', type=int, nargs='+', required=True, help='Dimensions to evaluate.')
        group.add_argument(
            '--avr', type=float, default=None,
            help='Asymptotic volume ratio in (0, 1]. Adds the tone lower bound for --volume.')
        group.add_argument('--volume', type=parse_positive_float, default=None, help='Volume of the domain.')

    elif name == 'gate':
        group.add_argument('--n', type=int, default=2, help='Dimension of the sphere.')
        group.add_argument(
            '--grid-size', type=int, default=200,
            help='Grid size for --margin-n2 and --certificate-n3.')
        group.add_argument(
            '--probe', action='store_true',
            help='Report only the ratios f_left / lam_right at the --L radii and whether they are '
                 'non-decreasing so far.')
        mode = group.add_mutually_exclusive_group(required=True)
        mode.add_argument('--L', type=float, nargs='+', help='Cap radii at which to evaluate the Rayleigh gate.')
        mode.add_argument(
            '--margin-n2', action='store_true',
            help='Minimum gate margin for n = 2 on a grid of cap parameters, divided by sqrt(kappa).')
        mode.add_argument(
            '--certificate-n3', action='store_true',
            help='Piece-wise linear separation that certifies the gate for n = 3.')

    elif name == 'profile':
        group.add_argument('--kind', choices=['cap', 'belt_sp', 'belt_sc'], default='cap', help='Domain and mode.')
        group.add_argument('--n', type=int, default=2, help='Dimension of the sphere for cap profiles.')
        group.add_argument('--L', type=float, default=None, help='Cap radius for cap profiles.')
        group.add_argument('--r', type=parse_positive_float, default=None, help='Inner radius for belt profiles.')
        group.add_argument('--R', type=parse_positive_float, default=None, help='Outer radius for belt profiles.')
        group.add_argument(
            '--resolution', type=int, default=128,
            help='Number of samples per angle. Belts give resolution^2 rows.')
    # fmt: on


_COMMAND_HELP = {
    'tone': 'Fundamental tone of a single cap together with its small-cap estimate.',
    'table1': 'Tones of small caps for n in {2, 3, 4} next to their Bessel-type estimates.',
    'table2': 'Tones Lambda of caps close to the whole sphere for n in {2, ..., 7} and their limits.',
    'table3': 'Gate thresholds L_n and critical volume fractions v_n.',
    'belt': 'Fixed-sign and sign-changing tones of a belt and which of them is the fundamental tone.',
    'cds': 'Critical outer to inner radius ratio of flat annuli.',
    'gap': 'Large-cap gap constant mu_n for n = 2 or 3.',
    'wn': 'Flat-limit constants w_n and optionally the lower bound for manifolds with the given volume ratio.',
    'gate': 'Rayleigh gate reports, the n = 2 gate margin, or the n = 3 separation certificate.',
    'profile': 'Sampled first eigenfunction of a cap or belt for external plotting.',
}


def create_parser(useColor: Optional[bool] = True) -> argparse.ArgumentParser:
    if useColor is None:
        useColor = RichHandler is not None and any(
            isinstance(handler, RichHandler) for handler in logging.getLogger().handlers
        )
    formatter = _RichFormatter if useColor and _RichFormatter else _CustomFormatter

    parser = argparse.ArgumentParser(
        prog='clampedtones',
        formatter_class=formatter,  # type: ignore
        add_help=False,
        description='''\
Computes fundamental tones of clamped plates on spherical caps and belts and reproduces
the derived constants: tone tables, gate thresholds, gap constants, and plot data.
''',
        epilog='''\
Examples:

 - clampedtones tone --n 2 --kappa 1 --L 0.4 --format json
 - clampedtones table3 --nmax 10
 - clampedtones belt --r 0.5 --R 1.0
 - clampedtones profile --kind belt_sc --r 0.5 --R 1.0 --resolution 64 -o belt.csv
''',
    )

    # fmt: off
    parser.add_argument(
        '-h', '--help', action='help', default=argparse.SUPPRESS,
        help='Show this help message and exit.')

    parser.add_argument(
        '-v', '--version', action=PrintVersionAction, nargs=0, default=argparse.SUPPRESS,
        help='Print version information and exit.')
    # fmt: on

    common = _create_common_parser()
    subparsers = parser.add_subparsers(dest='command', metavar='command', required=True)
    for name in COMMANDS:
        subparser = subparsers.add_parser(
            name, parents=[common], formatter_class=formatter, help=_COMMAND_HELP[name], description=_COMMAND_HELP[name]
        )
        _add_command_arguments(name, subparser)

    if 'argcomplete' in sys.modules:
        argcomplete.autocomplete(parser)
    return parser


def configure_logging(debug: int, useColor: bool) -> None:
    level = logging.ERROR
    if debug >= 3:
        level = logging.DEBUG
    elif debug >= 2:
        level = logging.INFO
    elif debug >= 1:
        level = logging.WARNING

    logging.addLevelName(logging.ERROR, '[Error]')
    logging.addLevelName(logging.WARNING, '[Warning]')
    logging.addLevelName(logging.INFO, '[Info]')
    logging.addLevelName(logging.DEBUG, '[Debug]')
    logging.addLevelName(logging.CRITICAL, '[Fatal]')

    handlers: list[Any] = []
    logFormat = '%(levelname)s %(name)s: %(message)s'

    if useColor and RichHandler is not None:
        logFormat = '%(name)s: %(message)s'
        console = None
        if RichConsole is not None and RichTheme is not None:
            # https://rich.readthedocs.io/en/stable/appendix/colors.html
            customTheme = RichTheme(
                {
                    # Level names must be lowercase or else they do not get matched.
                    'logging.level.[warning]': 'yellow',
                    'logging.level.[debug]': 'gray50',
                    'logging.level.[info]': 'green',
                    'logging.level.[error]': 'red',
                    'logging.level.[critical]': 'red',
                    'repr.number': 'yellow',
                    'repr.number_complex': 'yellow',
                }
            )
            # stdout carries the tables.
            console = RichConsole(theme=customTheme, stderr=True)

        handler = RichHandler(console=console, show_time=False)

        # Fix the bugged level name column width, which is always fixed to 8.
        logRender = getattr(handler, '_log_render', None)
        if logRender and hasattr(logRender, 'level_width'):
            logRender.level_width = max(
                len(logging.getLevelName(level))
                for level in [logging.DEBUG, logging.INFO, logging.WARNING, logging.ERROR, logging.CRITICAL]
            )

        handlers.append(handler)

    # Remove previous handlers as is necessary if useColor first True and then False in a subsequent call.
    rootLogger = logging.getLogger()
    if rootLogger.hasHandlers():
        rootLogger.handlers.clear()

    logging.basicConfig(level=level, format=logFormat, handlers=handlers or None)


def cli(rawArgs: Optional[list[str]] = None) -> int:
    """
    Command line interface for clampedtones. Call with args = [ '--help' ] for a description.

    rawArgs: In general, rawArgs is None, meaning sys.argv is used. When used programmatically with a custom
             list of arguments, the first argument should not be the path to the script / the executable,
             i.e., call either cli() or cli(sys.argv[1:])!

    Returns 0 on success, 2 for invalid arguments, and 3 if a solver did not converge.
    """

    # Manually parse --debug argument in case argument parsing with argparse itself goes wrong.
    tmpArgs = rawArgs or sys.argv
    debug = 1
    useColor = True
    for i, argument in enumerate(tmpArgs):
        if argument in ['-d', '--debug'] and i + 1 < len(tmpArgs) and tmpArgs[i + 1].isdecimal():
            debug = int(tmpArgs[i + 1])
        elif argument == '--color':
            useColor = True
        elif argument == '--no-color':
            useColor = False

    configure_logging(debug=debug, useColor=useColor)

    try:
        args = create_parser(useColor=useColor).parse_args(rawArgs)
        if args.debug != debug or args.color != useColor:
            configure_logging(args.debug, args.color)
        from .actions import process_parsed_arguments

        return process_parsed_arguments(args)
    except SystemExit as exception:
        # argparse exits with 2 on parse errors and with 0 for --help and --version.
        if exception.code is None:
            return EXIT_SUCCESS
        return exception.code if isinstance(exception.code, int) else EXIT_INVALID_ARGUMENTS
    except ConvergenceError as exception:
        logger.error("Exception: %s", exception, exc_info=logger.isEnabledFor(logging.DEBUG))
        return EXIT_NO_CONVERGENCE
    except (ClampedTonesError, argparse.ArgumentTypeError, ValueError, OSError) as exception:
        logger.error("Exception: %s", exception, exc_info=logger.isEnabledFor(logging.DEBUG))

    return EXIT_INVALID_ARGUMENTS
