import argparse
import logging
from typing import Any

from clampedtonescore.utils import DomainError, SeriesConfig, worker_count

from .output import MAX_DIGITS, MIN_DIGITS, OutputRequest

logger = logging.getLogger(__name__)


def parse_digits(value: str) -> int:
    try:
        digits = int(value)
    except ValueError as exception:
        raise argparse.ArgumentTypeError(f"Digits must be an integer but got '{value}'.") from exception
    if not MIN_DIGITS <= digits <= MAX_DIGITS:
        raise argparse.ArgumentTypeError(f"Digits must be in [{MIN_DIGITS}, {MAX_DIGITS}] but got {digits}.")
    return digits


def parse_positive_float(value: str) -> float:
    try:
        result = float(value)
    except ValueError as exception:
        raise argparse.ArgumentTypeError(f"Expected a number but got '{value}'.") from exception
    if not result > 0 or result == float('inf'):
        raise argparse.ArgumentTypeError(f"Expected a positive finite number but got '{value}'.")
    return result


def parse_positive_int(value: str) -> int:
    try:
        result = int(value)
    except ValueError as exception:
        raise argparse.ArgumentTypeError(f"Expected an integer but got '{value}'.") from exception
    if result < 1:
        raise argparse.ArgumentTypeError(f"Expected a positive integer but got '{value}'.")
    return result


def process_trivial_parsed_arguments(args) -> None:
    """
    Checks and post-processes the arguments shared by all subcommands and attaches the derived objects:
    args.series_config, args.parallelization and args.output_request.
    """
    try:
        args.series_config = SeriesConfig(rel_tol=args.tol, max_terms=args.max_terms)
    except DomainError as exception:
        raise argparse.ArgumentTypeError(str(exception)) from exception

    try:
        args.parallelization = worker_count(args.threads)
    except DomainError as exception:
        raise argparse.ArgumentTypeError(str(exception)) from exception

    args.output_request = OutputRequest(format=args.format, digits=args.digits, destination=args.output)


def parsed_args_to_options(args) -> dict[str, Any]:
    # fmt: off
    return {
        'command'         : args.command,
        'format'          : args.format,
        'digits'          : args.digits,
        'output'          : args.output,
        'relTol'          : args.series_config.rel_tol,
        'maxTerms'        : args.series_config.max_terms,
        'parallelization' : args.parallelization,
    }
    # fmt: on
