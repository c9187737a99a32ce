# pylint: disable=wrong-import-position
# pylint: disable=protected-access

import csv
import io
import json
import math
import os
import sys

import pytest

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '../core')))

from clampedtonescore.utils import THREADS_ENVIRONMENT_VARIABLE, DomainError, SeriesConfig

from clampedtones.cli import EXIT_INVALID_ARGUMENTS, EXIT_NO_CONVERGENCE, EXIT_SUCCESS
from clampedtones.cli import cli as clampedtonescli
from clampedtones.output import OutputRequest, Result, format_number, to_csv, to_json


def run_clampedtones(arguments, expectedExitCode: int = EXIT_SUCCESS) -> str:
    """Runs the command line interface in-process and returns what it wrote to stdout."""
    stdout = sys.stdout
    stderr = sys.stderr
    sys.stdout = io.StringIO()
    sys.stderr = io.StringIO()
    try:
        exitCode = clampedtonescli(list(arguments))
        output = sys.stdout.getvalue()
        errors = sys.stderr.getvalue()
    finally:
        sys.stdout = stdout
        sys.stderr = stderr

    if exitCode != expectedExitCode or (expectedExitCode == EXIT_SUCCESS and '[Error]' in errors):
        print("===== stdout =====\n", output)
        print("===== stderr =====\n", errors)
    assert exitCode == expectedExitCode
    if expectedExitCode == EXIT_SUCCESS:
        assert '[Error]' not in errors
    return output


def parse_csv(output: str) -> list[dict[str, str]]:
    return list(csv.DictReader(io.StringIO(output)))


def test_format_number():
    # fmt: off
    assert format_number(7.97644, 4   ) == '7.976'
    assert format_number(0.5    , 10  ) == '0.5'
    assert format_number(0.001  , 4   ) == '0.001'
    assert format_number(1e6    , 4   ) == '1000000'
    assert format_number(1e-4   , 4   ) == '1e-04'
    assert format_number(2.5e7  , 4   ) == '2.5e+07'
    assert format_number(-2.5e-7, 4   ) == '-2.5e-07'
    assert format_number(-0.0   , 4   ) == '0'
    assert format_number(3      , 4   ) == '3'
    assert format_number(True   , 4   ) == 'true'
    assert format_number(None   , 4   ) == ''
    assert format_number(math.nan, 4  ) == 'nan'
    assert format_number(-math.inf, 4 ) == '-inf'
    assert format_number('SC'   , 4   ) == 'SC'
    # fmt: on


def test_output_request():
    assert OutputRequest().to_stdout
    assert OutputRequest(destination='-').to_stdout
    assert not OutputRequest(destination='table.csv').to_stdout
    for arguments in [{'digits': 3}, {'digits': 16}, {'digits': 4.5}, {'format': 'xml'}]:
        with pytest.raises(DomainError):
            OutputRequest(**arguments)


def test_result_serialization():
    result = Result('test', {'n': 2}, ['x', 'y', 'residual'], [[1.0, math.inf, 1e-15]], ['residual'], single=True)
    assert to_csv(result, 4) == 'x,y,residual\n1,inf,1e-15\n'
    assert '"y": "inf"' in to_json(result, OutputRequest(format='json', digits=4), SeriesConfig())

    document = json.loads(to_json(result, OutputRequest(format='json', digits=4), SeriesConfig()))
    assert document['inputs'] == {'n': 2}
    assert document['values'] == {'x': 1, 'y': 'inf'}
    assert document['residuals'] == {'residual': 1e-15}
    assert document['meta']['command'] == 'test'
    assert document['meta']['digits'] == 4

    with pytest.raises(ValueError):
        Result('test', {}, ['x'], [[1.0, 2.0]])
    with pytest.raises(ValueError):
        Result('test', {}, ['x'], [[1.0]], ['residual'])


def test_help():
    output = run_clampedtones(['--help'])
    for command in ['tone', 'table1', 'table3', 'belt', 'profile']:
        assert command in output
    assert 'Numerics Options' in run_clampedtones(['tone', '--help'])


def test_version():
    assert 'clampedtonescore' in run_clampedtones(['--version'])


def test_tone_json():
    output = run_clampedtones(['tone', '--n', '2', '--kappa', '1', '--L', '0.4', '--format', 'json'])
    assert output.endswith('}\n')
    document = json.loads(output)
    assert set(document) == {'inputs', 'values', 'residuals', 'meta'}
    assert document['inputs'] == {'n': 2, 'kappa': 1, 'L': 0.4}
    assert document['values']['lambda'] == pytest.approx(7.9764, rel=5e-4)
    assert document['values']['Lambda'] == pytest.approx(7.9764**4, rel=2e-3)
    assert document['values']['estimate'] == pytest.approx(7.9906, rel=1e-4)
    assert abs(document['residuals']['residual']) < 1e-8
    assert document['meta']['command'] == 'tone'
    assert document['meta']['digits'] == 10


def test_tone_csv():
    output = run_clampedtones(['tone', '--n', '3', '--L', '0.03', '--digits', '7'])
    assert '\r' not in output
    assert output.endswith('\n')
    assert output.split('\n')[0] == 'n,kappa,L,L0,alpha,lambda,Lambda,estimate,bracket_lo,bracket_hi,residual'

    rows = parse_csv(output)
    assert len(rows) == 1
    assert float(rows[0]['lambda']) == pytest.approx(130.8839, rel=1e-6)
    assert len(rows[0]['lambda'].replace('.', '')) <= 7
    assert float(rows[0]['bracket_lo']) < float(rows[0]['lambda']) < float(rows[0]['bracket_hi'])


def test_output_is_deterministic():
    arguments = ['tone', '--n', '4', '--L', '1.3', '--format', 'json', '--digits', '15']
    assert run_clampedtones(arguments) == run_clampedtones(arguments)

    arguments = ['gate', '--n', '3', '--L', '0.5', '1.5']
    assert run_clampedtones(arguments) == run_clampedtones(arguments)


def test_output_file(tmp_path):
    path = tmp_path / 'tone.csv'
    assert run_clampedtones(['tone', '--n', '2', '--L', '0.4', '-o', str(path)]) == ''
    content = path.read_bytes()
    assert content.startswith(b'n,kappa,L,')
    assert b'\r' not in content
    assert content == run_clampedtones(['tone', '--n', '2', '--L', '0.4']).encode()


@pytest.mark.parametrize(
    "arguments",
    [
        [],
        ['unknown'],
        ['tone', '--n', '2'],
        ['tone', '--n', '2', '--L', '4.0'],
        ['tone', '--n', '2', '--L', '-0.4'],
        ['tone', '--n', '1', '--L', '0.4'],
        ['tone', '--n', '2', '--L', '0.4', '--kappa', '0'],
        ['tone', '--n', '2', '--L', '0.4', '--digits', '3'],
        ['tone', '--n', '2', '--L', '0.4', '--digits', '16'],
        ['tone', '--n', '2', '--L', '0.4', '--format', 'xml'],
        ['tone', '--n', '2', '--L', '0.4', '--tol', '1e-3'],
        ['tone', '--n', '2', '--L', '0.4', '--max-terms', '10'],
        ['tone', '--n', '2', '--L', '0.4', '--threads', '0'],
        ['belt', '--r', '1.0', '--R', '0.5'],
        ['belt', '--r', '0.5', '--R', '4.0'],
        ['gap', '--n', '4'],
        ['wn', '--n', '2', '--avr', '0.5'],
        ['wn', '--n', '3', '--avr', '1.5', '--volume', '1'],
        ['gate', '--n', '2'],
        ['gate', '--margin-n2', '--certificate-n3'],
        ['table3', '--nmax', '3'],
        ['profile', '--kind', 'cap', '--n', '2'],
        ['profile', '--kind', 'belt_sp', '--r', '0.5'],
        ['profile', '--kind', 'cap', '--n', '2', '--L', '0.4', '--resolution', '8'],
    ],
)
def test_invalid_arguments(arguments):
    assert run_clampedtones(arguments, EXIT_INVALID_ARGUMENTS) == ''


def test_no_convergence():
    # alpha = sin^2(1.2) is below the continuation limit, so the series needs far more than 64 terms.
    run_clampedtones(['tone', '--n', '2', '--L', '2.4', '--max-terms', '64'], EXIT_NO_CONVERGENCE)


def test_threads_environment_variable(monkeypatch):
    monkeypatch.setenv(THREADS_ENVIRONMENT_VARIABLE, '0')
    run_clampedtones(['tone', '--n', '2', '--L', '0.4'], EXIT_INVALID_ARGUMENTS)

    monkeypatch.setenv(THREADS_ENVIRONMENT_VARIABLE, '1')
    rows = parse_csv(run_clampedtones(['gate', '--n', '2', '--L', '0.5', '1.0', '--threads', '4']))
    assert len(rows) == 2


def test_table1():
    output = run_clampedtones(['table1', '--digits', '8', '--threads', '1'])
    rows = parse_csv(output)
    assert list(rows[0]) == ['n', 'L', 'lambda', 'estimate', 'residual']
    assert len(rows) == 12
    values = {(int(row['n']), float(row['L'])): float(row['lambda']) for row in rows}
    assert values[(2, 0.4)] == pytest.approx(7.9764, rel=5e-4)
    assert values[(3, 0.03)] == pytest.approx(130.8839, rel=5e-4)
    assert values[(4, 0.0001)] == pytest.approx(46108.9987, rel=5e-4)


def test_table2():
    rows = parse_csv(run_clampedtones(['table2', '--digits', '6']))
    assert len(rows) == 24
    values = {(int(row['n']), row['L_over_pi']): float(row['Lambda']) for row in rows}
    assert values[(4, '0.99')] == pytest.approx(0.8018, rel=5e-3)
    assert values[(2, '0.99')] == pytest.approx(0.8437, rel=5e-3)
    limits = {int(row['n']): float(row['limit']) for row in rows}
    assert limits[2] == pytest.approx(0.83274, abs=1e-4)
    assert limits[5] == 0


@pytest.mark.parallel
def test_table3():
    rows = parse_csv(run_clampedtones(['table3', '--n', '2', '4', '--grid-size', '64']))
    assert [row['n'] for row in rows] == ['2', '4']
    assert float(rows[0]['v_n']) == 0
    assert float(rows[1]['L_over_pi']) == pytest.approx(0.27, abs=0.005)
    assert float(rows[1]['v_n']) == pytest.approx(0.0763, abs=0.005)


def test_belt():
    rows = parse_csv(run_clampedtones(['belt', '--r', '0.5', '--R', '1.0']))
    assert rows[0]['regime'] == 'FixedSign'
    assert float(rows[0]['lambda_sp']) < float(rows[0]['lambda_sc'])

    document = json.loads(run_clampedtones(['belt', '--r', '0.0001', '--R', '1.0', '--euclidean', '--format', 'json']))
    assert document['inputs']['euclidean'] is True
    assert document['values']['kappa'] == 0
    assert document['values']['regime'] == 'SignChanging'
    assert 'tolerance' in document['residuals']


@pytest.mark.slow
def test_cds():
    document = json.loads(run_clampedtones(['cds', '--format', 'json']))
    assert document['values']['c_cds'] == pytest.approx(762.3264, abs=0.5)
    assert document['values']['lambda2_c'] == pytest.approx(4.769102, abs=1e-3)


def test_gap():
    document = json.loads(run_clampedtones(['gap', '--n', '3', '--format', 'json']))
    assert document['values']['mu'] == pytest.approx(1.0277, abs=5e-4)
    assert document['values']['limit'] == pytest.approx(1.0561, abs=1e-4)
    assert abs(document['residuals']['residual']) < 1e-9


def test_wn():
    rows = parse_csv(run_clampedtones(['wn', '--n', '2', '3', '4', '50', '--avr', '0.5', '--volume', '4.18879']))
    assert list(rows[0]) == ['n', 'w_n', 'avr', 'volume', 'lower_bound']
    assert [float(row['w_n']) for row in rows[:2]] == [1.0, 1.0]
    assert float(rows[2]['w_n']) == pytest.approx(0.954, abs=1e-3)
    assert float(rows[3]['w_n']) > 0.99
    assert float(rows[1]['lower_bound']) == pytest.approx(94.3, abs=0.1)

    assert list(parse_csv(run_clampedtones(['wn', '--n', '5']))[0]) == ['n', 'w_n']


def test_gate():
    rows = parse_csv(run_clampedtones(['gate', '--n', '2', '--L', '0.5', '1.0', '2.0']))
    assert [row['holds'] for row in rows] == ['true'] * 3
    assert all(float(row['margin']) > 0 for row in rows)

    document = json.loads(run_clampedtones(['gate', '--n', '4', '--L', '0.3', '--format', 'json']))
    assert document['values']['holds'] is False

    rows = parse_csv(run_clampedtones(['gate', '--n', '2', '--L', '0.001', '--probe']))
    assert list(rows[0]) == ['L', 'ratio', 'nondecreasing']
    assert float(rows[0]['ratio']) == pytest.approx(1.064, abs=1e-3)

    document = json.loads(run_clampedtones(['gate', '--margin-n2', '--grid-size', '20', '--format', 'json']))
    assert document['values']['holds'] is True
    assert document['values']['min_margin'] > 0.2

    document = json.loads(run_clampedtones(['gate', '--certificate-n3', '--grid-size', '50', '--format', 'json']))
    assert document['values']['holds'] is True
    assert document['values']['x1'] == pytest.approx(0.767, abs=1e-3)


def test_profile_cap():
    rows = parse_csv(run_clampedtones(['profile', '--n', '3', '--L', '1.0', '--resolution', '16']))
    assert list(rows[0]) == ['theta', 'value']
    assert len(rows) == 16
    assert float(rows[0]['theta']) == 0
    assert float(rows[-1]['theta']) == pytest.approx(1.0)
    assert float(rows[-1]['value']) == pytest.approx(0, abs=1e-6)
    assert max(abs(float(row['value'])) for row in rows) == pytest.approx(1, abs=1e-12)


@pytest.mark.parametrize('kind', ['belt_sp', 'belt_sc'])
def test_profile_belt(kind, tmp_path):
    path = tmp_path / 'profile.csv'
    arguments = ['profile', '--kind', kind, '--r', '0.5', '--R', '1.0', '--resolution', '16', '-o', str(path)]
    assert run_clampedtones(arguments) == ''

    rows = parse_csv(path.read_text(encoding='utf-8'))
    assert list(rows[0]) == ['theta', 'xi', 'value']
    assert len(rows) == 16 * 16
    if kind == 'belt_sc':
        assert all(float(row['value']) == 0 for row in rows if float(row['xi']) == 0)
