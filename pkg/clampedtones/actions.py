import argparse
import logging
import math
from typing import Callable

from clampedtonescore.belt import belt_tones, belt_tones_euclid, cds_constant
from clampedtonescore.coupled import (
    n2_gate_margin,
    n3_separation_certificate,
    ratio_probe,
    rayleigh_gate,
    scan_threshold,
)
from clampedtonescore.geometry import BeltSpec, CapSpec, SphereParams
from clampedtonescore.ParallelEvaluator import ParallelEvaluator
from clampedtonescore.ProgressBar import ProgressBar
from clampedtonescore.tone import (
    avr_lower_bound,
    cap_tone,
    gap_function,
    gap_mu,
    large_cap_gap,
    small_cap_estimate,
    w_n,
)
from clampedtonescore.utils import SeriesConfig

from . import CLIHelpers
from .output import Result, emit_profile, write_result

logger = logging.getLogger(__name__)

TABLE1_DIMENSIONS = (2, 3, 4)
TABLE1_RADII = (0.4, 0.03, 0.002, 0.0001)
TABLE2_DIMENSIONS = (2, 3, 4, 5, 6, 7)
TABLE2_RADII_OVER_PI = (0.99, 0.999, 0.9999, 0.99999)
TABLE3_DIMENSIONS = (4, 5, 6, 7, 10, 50, 100)
N2_MARGIN_BOUND = 0.2


def _table1_cell(n: int, kappa: float, L: float, cfg: SeriesConfig) -> list:
    sp = SphereParams(n, kappa)
    solution = cap_tone(sp, CapSpec.from_radius(sp, L), cfg)
    return [n, L, solution.lam, small_cap_estimate(sp, L), solution.residual]


def _table2_cell(n: int, kappa: float, ratio: float, cfg: SeriesConfig) -> list:
    sp = SphereParams(n, kappa)
    solution = cap_tone(sp, CapSpec.from_radius(sp, ratio * sp.max_radius), cfg)
    return [n, ratio, solution.Lambda, large_cap_gap(sp), solution.residual]


def _gate_cell(n: int, kappa: float, L: float, cfg: SeriesConfig):
    return rayleigh_gate(SphereParams(n, kappa), L, cfg)


def _evaluate_cells(args, function: Callable, cells: list, description: str) -> list:
    with ParallelEvaluator(args.parallelization) as evaluator, ProgressBar(len(cells), description) as progressBar:
        return evaluator.map(function, cells, progress=progressBar.update)


def run_tone(args) -> Result:
    sp = SphereParams(args.n, args.kappa)
    cap = CapSpec.from_radius(sp, args.L)
    solution = cap_tone(sp, cap, args.series_config)
    logger.debug("Cap tone for n = %d, L = %s: %s", sp.n, cap.L, solution)

    columns = ['n', 'kappa', 'L', 'L0', 'alpha', 'lambda', 'Lambda', 'estimate', 'bracket_lo', 'bracket_hi', 'residual']
    row = [
        sp.n,
        sp.kappa,
        cap.L,
        cap.L0,
        cap.alpha,
        solution.lam,
        solution.Lambda,
        small_cap_estimate(sp, cap.L),
        solution.bracket_lo,
        solution.bracket_hi,
        solution.residual,
    ]
    inputs = {'n': sp.n, 'kappa': sp.kappa, 'L': cap.L}
    return Result('tone', inputs, columns, [row], residualColumns=['residual'], single=True)


def run_table1(args) -> Result:
    cells = [(n, args.kappa, L, args.series_config) for n in TABLE1_DIMENSIONS for L in TABLE1_RADII]
    rows = _evaluate_cells(args, _table1_cell, cells, "Small caps")
    inputs = {'kappa': args.kappa, 'n': list(TABLE1_DIMENSIONS), 'L': list(TABLE1_RADII)}
    return Result('table1', inputs, ['n', 'L', 'lambda', 'estimate', 'residual'], rows, residualColumns=['residual'])


def run_table2(args) -> Result:
    cells = [(n, args.kappa, ratio, args.series_config) for ratio in TABLE2_RADII_OVER_PI for n in TABLE2_DIMENSIONS]
    rows = _evaluate_cells(args, _table2_cell, cells, "Large caps")
    inputs = {'kappa': args.kappa, 'n': list(TABLE2_DIMENSIONS), 'L_over_pi': list(TABLE2_RADII_OVER_PI)}
    columns = ['n', 'L_over_pi', 'Lambda', 'limit', 'residual']
    return Result('table2', inputs, columns, rows, residualColumns=['residual'])


def run_table3(args) -> Result:
    dimensions = args.n if args.n else [n for n in TABLE3_DIMENSIONS if n <= args.nmax]
    if not dimensions:
        raise argparse.ArgumentTypeError(f"No tabulated dimension is <= {args.nmax}. Use --n to choose dimensions.")

    rows = []
    for n in dimensions:
        with ProgressBar(args.grid_size, f"Gate margins n = {n}") as progressBar:
            threshold = scan_threshold(
                n,
                args.kappa,
                args.grid_size,
                args.series_config,
                parallelization=args.parallelization,
                progress=progressBar.update,
            )
        rows.append([n, threshold.L_n * math.sqrt(args.kappa) / math.pi, threshold.L_n, threshold.v_n])

    inputs = {'kappa': args.kappa, 'n': list(dimensions), 'grid_size': args.grid_size}
    return Result('table3', inputs, ['n', 'L_over_pi', 'L', 'v_n'], rows)


def run_belt(args) -> Result:
    belt = BeltSpec(args.r, args.R)
    kappa = 0.0 if args.euclidean else args.kappa
    solution = belt_tones_euclid(belt) if args.euclidean else belt_tones(kappa, belt, args.series_config)

    columns = ['r', 'R', 'kappa', 'lambda_sp', 'lambda_sc', 'regime', 'tolerance']
    row = [belt.r, belt.R, kappa, solution.lambda_sp, solution.lambda_sc, solution.regime.value, solution.tolerance]
    inputs = {'r': belt.r, 'R': belt.R, 'kappa': kappa, 'euclidean': bool(args.euclidean)}
    return Result('belt', inputs, columns, [row], residualColumns=['tolerance'], single=True)


def run_cds(args) -> Result:
    result = cds_constant()
    row = [result.c_cds, result.lambda1_c, result.lambda2_c]
    return Result('cds', {}, ['c_cds', 'lambda1_c', 'lambda2_c'], [row], single=True)


def run_gap(args) -> Result:
    mu = gap_mu(args.n)
    limit = large_cap_gap(SphereParams(args.n, args.kappa))
    row = [args.n, mu, mu * mu, limit, gap_function(args.n, mu)]
    inputs = {'n': args.n, 'kappa': args.kappa}
    return Result('gap', inputs, ['n', 'mu', 'mu_sq', 'limit', 'residual'], [row], residualColumns=['residual'])


def run_wn(args) -> Result:
    if (args.avr is None) != (args.volume is None):
        raise argparse.ArgumentTypeError("The options --avr and --volume must be specified together.")

    withBound = args.avr is not None
    rows = []
    for n in args.n:
        row = [n, w_n(n)]
        if withBound:
            row += [args.avr, args.volume, avr_lower_bound(n, args.avr, args.volume)]
        rows.append(row)

    columns = ['n', 'w_n'] + (['avr', 'volume', 'lower_bound'] if withBound else [])
    inputs = {'n': list(args.n), 'avr': args.avr, 'volume': args.volume}
    return Result('wn', inputs, columns, rows)


def run_gate(args) -> Result:
    cfg = args.series_config
    if args.margin_n2:
        margin = n2_gate_margin(args.kappa, args.grid_size, cfg)
        row = [args.kappa, args.grid_size, margin, N2_MARGIN_BOUND, margin > N2_MARGIN_BOUND]
        inputs = {'kappa': args.kappa, 'grid_size': args.grid_size}
        return Result('gate', inputs, ['kappa', 'grid_size', 'min_margin', 'bound', 'holds'], [row], single=True)

    if args.certificate_n3:
        certificate = n3_separation_certificate(args.grid_size)
        slopes = list(certificate.slopes)
        columns = ['x1', 'x2', 'x3', 'slope1', 'slope2', 'slope3', 'separation_slope', 'min_gap', 'holds']
        row = [certificate.x1, certificate.x2, certificate.x3, *slopes, certificate.separation_slope]
        row += [certificate.min_gap, certificate.holds]
        return Result('gate', {'grid_size': args.grid_size}, columns, [row], single=True)

    sp = SphereParams(args.n, args.kappa)
    inputs = {'n': sp.n, 'kappa': sp.kappa, 'L': list(args.L)}
    if args.probe:
        ratios, nondecreasing = ratio_probe(sp, args.L, cfg)
        rows = []
        soFar = True
        for i, (L, ratio) in enumerate(zip(args.L, ratios)):
            soFar = soFar and (i == 0 or ratios[i - 1] <= ratio)
            rows.append([L, ratio, soFar])
        logger.info("Gate ratios are %snon-decreasing along the given radii.", "" if nondecreasing else "not ")
        return Result('gate', inputs, ['L', 'ratio', 'nondecreasing'], rows)

    cells = [(sp.n, sp.kappa, float(L), cfg) for L in args.L]
    reports = _evaluate_cells(args, _gate_cell, cells, "Rayleigh gate")
    columns = ['L', 'L0', 'f_left', 'lam_right', 'holds', 'margin', 'ratio']
    rows = [[r.L, r.L0, r.f_left, r.lam_right, r.holds, r.margin, r.ratio] for r in reports]
    return Result('gate', inputs, columns, rows, single=len(rows) == 1)


def run_profile(args) -> Result:
    if args.kind == 'cap':
        if args.L is None:
            raise argparse.ArgumentTypeError("Cap profiles require --L.")
        params = {'n': args.n, 'kappa': args.kappa, 'L': args.L}
    else:
        if args.r is None or args.R is None:
            raise argparse.ArgumentTypeError("Belt profiles require --r and --R.")
        params = {'kappa': args.kappa, 'r': args.r, 'R': args.R}
    return emit_profile(args.kind, params, args.resolution, args.output_request, args.series_config)


_HANDLERS = {
    'tone': run_tone,
    'table1': run_table1,
    'table2': run_table2,
    'table3': run_table3,
    'belt': run_belt,
    'cds': run_cds,
    'gap': run_gap,
    'wn': run_wn,
    'gate': run_gate,
    'profile': run_profile,
}


def process_parsed_arguments(args) -> int:
    CLIHelpers.process_trivial_parsed_arguments(args)
    logger.debug("Options: %s", CLIHelpers.parsed_args_to_options(args))

    result = _HANDLERS[args.command](args)
    # The profile writes itself.
    if args.command != 'profile':
        write_result(result, args.output_request, args.series_config)
    return 0
