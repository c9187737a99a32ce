import csv
import dataclasses
import io
import json
import logging
import math
import sys
from typing import Any, Optional, Sequence

import numpy as np

from clampedtonescore.belt import BeltKind, BeltProfile
from clampedtonescore.geometry import BeltSpec, CapSpec, SphereParams
from clampedtonescore.tone import CapProfile
from clampedtonescore.utils import DEFAULT_SERIES_CONFIG, DomainError, SeriesConfig

from .version import __version__

logger = logging.getLogger(__name__)

FORMATS = ('csv', 'json')
PROFILE_KINDS = ('cap', 'belt_sp', 'belt_sc')
MIN_DIGITS = 4
MAX_DIGITS = 15
MIN_PROFILE_RESOLUTION = 16

# Numbers outside of this magnitude range are printed with an exponent.
_POSITIONAL_RANGE = (1e-3, 1e6)


@dataclasses.dataclass(frozen=True)
class OutputRequest:
    """Output format, significant digits and destination path. No destination or '-' means stdout."""

    format: str = 'csv'
    digits: int = 10
    destination: Optional[str] = None

    def __post_init__(self):
        if self.format not in FORMATS:
            raise DomainError(f"Output format must be one of {', '.join(FORMATS)} but got '{self.format}'!")
        if int(self.digits) != self.digits or not MIN_DIGITS <= self.digits <= MAX_DIGITS:
            raise DomainError(f"Digits must be an integer in [{MIN_DIGITS}, {MAX_DIGITS}] but got {self.digits}!")

    @property
    def to_stdout(self) -> bool:
        return not self.destination or self.destination == '-'


@dataclasses.dataclass
class Result:
    """
    A table of results. Columns listed in residualColumns are written as normal CSV columns but go into the
    'residuals' object of the JSON output. Single results are written as JSON objects instead of lists.
    """

    command: str
    inputs: dict[str, Any]
    columns: list[str]
    rows: list[list[Any]]
    residualColumns: list[str] = dataclasses.field(default_factory=list)
    single: bool = False

    def __post_init__(self):
        for row in self.rows:
            if len(row) != len(self.columns):
                raise ValueError(f"Row {row} does not match the columns {self.columns}!")
        unknown = set(self.residualColumns) - set(self.columns)
        if unknown:
            raise ValueError(f"Residual columns {sorted(unknown)} are not part of the columns {self.columns}!")


def format_number(value: Any, digits: int) -> str:
    """
    Locale-independent number formatting with the given count of significant digits. Magnitudes below 1e-3
    or above 1e6 get an exponent. Trailing zeros are trimmed so that identical values always print identically.
    """
    if value is None:
        return ''
    if isinstance(value, (bool, np.bool_)):
        return 'true' if value else 'false'
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, str):
        return value

    value = float(value)
    if math.isnan(value):
        return 'nan'
    if math.isinf(value):
        return 'inf' if value > 0 else '-inf'
    if value == 0:
        return '0'
    if _POSITIONAL_RANGE[0] <= abs(value) <= _POSITIONAL_RANGE[1]:
        return np.format_float_positional(value, precision=digits, unique=False, fractional=False, trim='-')
    return np.format_float_scientific(value, precision=digits - 1, unique=False, trim='-', exp_digits=2)


def _json_scalar(value: Any, digits: int) -> str:
    if value is None:
        return 'null'
    if isinstance(value, str):
        return json.dumps(value, ensure_ascii=False)
    if isinstance(value, (bool, np.bool_, int, np.integer)):
        return format_number(value, digits)
    if not math.isfinite(float(value)):
        # Quoted 'nan', 'inf' and '-inf' keep the document valid JSON.
        return json.dumps(format_number(value, digits))
    return format_number(value, digits)


def _to_json(value: Any, digits: int, indent: int = 0) -> str:
    """Like json.dumps with indent=2, but with numbers formatted by format_number."""
    padding = '  ' * (indent + 1)
    closing = '  ' * indent
    if isinstance(value, dict):
        if not value:
            return '{}'
        items = [
            f"{padding}{json.dumps(str(key), ensure_ascii=False)}: {_to_json(item, digits, indent + 1)}"
            for key, item in value.items()
        ]
        return '{\n' + ',\n'.join(items) + '\n' + closing + '}'
    if isinstance(value, (list, tuple)):
        if not value:
            return '[]'
        items = [f"{padding}{_to_json(item, digits, indent + 1)}" for item in value]
        return '[\n' + ',\n'.join(items) + '\n' + closing + ']'
    return _json_scalar(value, digits)


def meta_data(command: str, request: OutputRequest, cfg: SeriesConfig) -> dict[str, Any]:
    # Nothing that changes between identical runs, e.g., time stamps or worker counts, may go in here.
    # fmt: off
    return {
        'command'   : command,
        'version'   : __version__,
        'digits'    : request.digits,
        'rel_tol'   : cfg.rel_tol,
        'max_terms' : cfg.max_terms,
    }
    # fmt: on


def to_csv(result: Result, digits: int) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(result.columns)
    for row in result.rows:
        writer.writerow([format_number(value, digits) for value in row])
    return buffer.getvalue()


def to_json(result: Result, request: OutputRequest, cfg: SeriesConfig) -> str:
    valueColumns = [i for i, column in enumerate(result.columns) if column not in result.residualColumns]
    residualColumns = [i for i, column in enumerate(result.columns) if column in result.residualColumns]

    def select(row: Sequence[Any], indexes: list[int]) -> dict[str, Any]:
        return {result.columns[i]: row[i] for i in indexes}

    values: Any = [select(row, valueColumns) for row in result.rows]
    residuals: Any = [select(row, residualColumns) for row in result.rows] if residualColumns else {}
    if result.single and len(result.rows) == 1:
        values = values[0]
        residuals = residuals[0] if residualColumns else {}

    document = {
        'inputs': result.inputs,
        'values': values,
        'residuals': residuals,
        'meta': meta_data(result.command, request, cfg),
    }
    return _to_json(document, request.digits) + '\n'


def write_result(result: Result, request: OutputRequest, cfg: SeriesConfig = DEFAULT_SERIES_CONFIG) -> None:
    text = to_csv(result, request.digits) if request.format == 'csv' else to_json(result, request, cfg)
    if request.to_stdout:
        sys.stdout.write(text)
        sys.stdout.flush()
        return

    with open(request.destination, 'w', encoding='utf-8', newline='') as file:  # type: ignore
        file.write(text)
    logger.info("Wrote %d rows to %s.", len(result.rows), request.destination)


def profile_result(
    kind: str, params: dict[str, float], resolution: int, cfg: SeriesConfig = DEFAULT_SERIES_CONFIG
) -> Result:
    """
    Samples the normalized first eigenfunction. Caps give (theta, value) rows on [0, sqrt(kappa) L], belts give
    (theta, xi, value) rows on the product of [sqrt(kappa) r, sqrt(kappa) R] and [0, 2 pi).
    """
    if kind not in PROFILE_KINDS:
        raise DomainError(f"Profile kind must be one of {', '.join(PROFILE_KINDS)} but got '{kind}'!")
    if int(resolution) != resolution or resolution < MIN_PROFILE_RESOLUTION:
        raise DomainError(f"Resolution must be an integer >= {MIN_PROFILE_RESOLUTION} but got {resolution}!")
    resolution = int(resolution)
    kappa = float(params.get('kappa', 1.0))

    if kind == 'cap':
        sp = SphereParams(int(params['n']), kappa)
        profile = CapProfile(sp, CapSpec.from_radius(sp, float(params['L'])), cfg, resolution=resolution)
        theta = np.linspace(0, profile.max_angle, resolution)
        values = np.asarray(profile(theta))
        rows = [[float(angle), float(value)] for angle, value in zip(theta, values)]
        inputs = {'kind': kind, 'n': sp.n, 'kappa': kappa, 'L': float(params['L']), 'resolution': resolution}
        return Result('profile', inputs, ['theta', 'value'], rows)

    belt = BeltSpec(float(params['r']), float(params['R']))
    belt.check(kappa)
    beltKind = BeltKind.SP if kind == 'belt_sp' else BeltKind.SC
    profile = BeltProfile(kappa, belt, beltKind, cfg, resolution=resolution)
    theta = np.linspace(*profile.angles, resolution)
    xi = np.linspace(0, 2 * math.pi, resolution, endpoint=False)
    radial = np.asarray(profile.radial(theta))
    azimuthal = np.sin(xi) if beltKind is BeltKind.SC else np.ones_like(xi)

    rows = [
        [float(angle), float(azimuth), float(value * factor)]
        for angle, value in zip(theta, radial)
        for azimuth, factor in zip(xi, azimuthal)
    ]
    inputs = {'kind': kind, 'kappa': kappa, 'r': belt.r, 'R': belt.R, 'resolution': resolution}
    return Result('profile', inputs, ['theta', 'xi', 'value'], rows)


def emit_profile(
    kind: str,
    params: dict[str, float],
    resolution: int,
    request: OutputRequest,
    cfg: SeriesConfig = DEFAULT_SERIES_CONFIG,
) -> Result:
    result = profile_result(kind, params, resolution, cfg)
    write_result(result, request, cfg)
    return result
