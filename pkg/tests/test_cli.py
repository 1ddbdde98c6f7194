import json
import math

import numpy as np
import pandas as pd
import pytest
from click.testing import CliRunner

from geonorm.cli import ANGLE, geonorm
from geonorm.geometry import geodesic_distance


@pytest.fixture
def runner():
    return CliRunner()


def invoke(runner, *args):
    return runner.invoke(geonorm, [str(arg) for arg in args])


@pytest.mark.parametrize('text, expected', [
    ('3pi/4', 3 * math.pi / 4),
    ('pi', math.pi),
    ('-pi/2', -math.pi / 2),
    ('0.5pi', 0.5 * math.pi),
    ('2*pi/3', 2 * math.pi / 3),
    ('1.25', 1.25),
])
def test_angle_parameter(text, expected):
    assert ANGLE.convert(text, None, None) == pytest.approx(expected)


def test_sample_is_byte_identical(runner, tmp_path):
    first, second = tmp_path / 'a.csv', tmp_path / 'b.csv'
    for path in (first, second):
        result = invoke(runner, 'sample', '--n', 5, '--seed', 42, '--out', path)
        assert result.exit_code == 0, result.output
    assert first.read_bytes() == second.read_bytes()
    text = first.read_text()
    assert text.startswith('index,theta\n')
    assert '\r' not in text
    assert len(text.strip().splitlines()) == 6


def test_sample_concentration(runner, tmp_path):
    path = tmp_path / 'sample.csv'
    result = invoke(runner, 'sample', '--n', 100, '--gamma', 10, '--mu', 'pi/4',
                    '--seed', 3, '--out', path)
    assert result.exit_code == 0
    theta = pd.read_csv(path)['theta'].to_numpy()
    distances = np.array([geodesic_distance(math.pi / 4, t) for t in theta])
    assert np.all(distances < math.pi)
    assert np.mean(distances <= 3 / math.sqrt(10)) >= 0.95


def test_empty_sample(runner, tmp_path):
    path = tmp_path / 'empty.csv'
    result = invoke(runner, 'sample', '--n', 0, '--out', path)
    assert result.exit_code == 0
    assert path.read_text() == 'index,theta\n'


def test_sample_then_fit(runner, tmp_path):
    data, report = tmp_path / 'sample.csv', tmp_path / 'fit.json'
    assert invoke(runner, 'sample', '--n', 500, '--mu', '3pi/4', '--gamma', 1,
                  '--seed', 11, '--out', data).exit_code == 0
    result = invoke(runner, 'fit', data, '--out', report)
    assert result.exit_code == 0, result.output
    fit = json.loads(report.read_text())
    assert geodesic_distance(fit['mu_hat'], 3 * math.pi / 4) ** 2 <= 0.02
    for key in ('gamma_hat', 'se_mu', 'se_gamma', 'log_likelihood',
                'mean_set_multiplicity', 'ci_mu_lower', 'ci_gamma_upper',
                'vm_mu_hat', 'vm_kappa_hat'):
        assert fit[key] is not None
    assert fit['n'] == 500 and fit['level'] == 0.95


def test_fit_identical_angles(runner, tmp_path):
    path = tmp_path / 'same.csv'
    path.write_text('theta\n1.0\n1.0\n1.0\n')
    result = invoke(runner, 'fit', path)
    assert result.exit_code == 2
    assert 'DegenerateSample' in result.output


def test_fit_antipodal_pair(runner, tmp_path):
    path, report = tmp_path / 'pair.csv', tmp_path / 'fit.json'
    path.write_text(f'theta\n0\n{math.pi!r}\n')
    result = invoke(runner, 'fit', path, '--out', report)
    assert result.exit_code == 0, result.output
    fit = json.loads(report.read_text())
    assert fit['mean_set_multiplicity'] == 2
    assert fit['vm_mu_hat'] is None
    assert fit['vm_error'].startswith('DirectionUndefined')


def test_fit_parse_error_reports_line(runner, tmp_path):
    path = tmp_path / 'bad.csv'
    path.write_text('theta\n0.5\nabc\n1.0\n')
    result = invoke(runner, 'fit', path)
    assert result.exit_code == 1
    assert 'line 3' in result.output


def test_fit_missing_input(runner, tmp_path):
    result = invoke(runner, 'fit', tmp_path / 'missing.csv')
    assert result.exit_code == 1
    assert 'InputError' in result.output
    assert 'missing.csv' in result.output


def test_fit_to_stdout(runner, tmp_path):
    path = tmp_path / 'values.csv'
    path.write_text('theta\n0.1\n0.4\n0.2\n0.35\n')
    result = invoke(runner, 'fit', path, '--level', 0.9)
    assert result.exit_code == 0
    assert '"level": 0.9' in result.output


def test_moments(runner, tmp_path):
    path = tmp_path / 'moments.json'
    result = invoke(runner, 'moments', '--mu', 1, '--gamma', 2, '--kappa', 3,
                    '--p-max', 3, '--out', path)
    assert result.exit_code == 0
    table = json.loads(path.read_text())
    assert table['kappa'] == 3.0
    assert 'gn_phi3_re' in table and 'gn_phi4_re' not in table


def test_curves_and_fisher_curves(runner, tmp_path):
    curves, fisher = tmp_path / 'curves.csv', tmp_path / 'fisher.csv'
    grid = ('--grid-min', 1e-4, '--grid-max', 10, '--grid-points', 12)
    assert invoke(runner, 'curves', *grid, '--out', curves).exit_code == 0
    assert invoke(runner, 'fisher-curves', *grid, '--out', fisher).exit_code == 0
    frame = pd.read_csv(curves)
    assert list(frame.columns) == ['concentration', 'gn_var_I', 'gn_var_E', 'vm_var_I', 'vm_var_E']
    assert frame['gn_var_I'].iloc[0] == pytest.approx(math.pi ** 2 / 3, abs=1e-3)
    assert list(pd.read_csv(fisher).columns) == ['concentration', 'inv_j1', 'inv_j2']


def test_mse_study_with_details(runner, tmp_path):
    out, details = tmp_path / 'mse.csv', tmp_path / 'details.csv'
    result = invoke(runner, 'mse-study', '--mu', 1, '--gamma', 2, '--sizes', '10,20',
                    '--reps', 5, '--seed', 4, '--out', out, '--details', details)
    assert result.exit_code == 0, result.output
    table = pd.read_csv(out)
    assert table['n'].tolist() == [10, 20]
    assert (table['m'] == 5).all()
    assert len(pd.read_csv(details)) == 10
    assert 'corr_mu_gamma' not in table.columns
    metadata = json.loads((tmp_path / 'mse.csv.json').read_text())
    assert metadata['estimator'] == 'mle'
    assert len(metadata['corr_mu_gamma']) == 2


def test_mse_study_moment_estimator(runner, tmp_path):
    out = tmp_path / 'mse.csv'
    result = invoke(runner, 'mse-study', '--mu', 1, '--gamma', 2, '--n', 10,
                    '--reps', 4, '--estimator', 'moments', '--out', out)
    assert result.exit_code == 0, result.output
    assert len(pd.read_csv(out)) == 1
    assert json.loads((tmp_path / 'mse.csv.json').read_text())['estimator'] == 'moments'


def test_clt_study_writes_sidecar(runner, tmp_path):
    out = tmp_path / 'clt.csv'
    result = invoke(runner, 'clt-study', '--n', 40, '--reps', 30, '--seed', 2, '--out', out)
    assert result.exit_code == 0, result.output
    table = pd.read_csv(out)
    assert len(table) == 31
    metadata = json.loads((tmp_path / 'clt.csv.json').read_text())
    assert table['replication'].iloc[-1] == 'variance'
    assert table['standardized_error'].iloc[-1] == pytest.approx(metadata['variance'])
    for key in ('variance', 'ks_statistic', 'ks_pvalue', 'empirical_variance', 'created'):
        assert key in metadata


def test_config_overrides_flags(runner, tmp_path):
    config, out = tmp_path / 'config.json', tmp_path / 'sample.csv'
    config.write_text(json.dumps({'n': 7, 'mu': '3pi/4'}))
    result = invoke(runner, 'sample', '--n', 3, '--config', config, '--out', out)
    assert result.exit_code == 0, result.output
    assert len(pd.read_csv(out)) == 7


def test_config_unknown_key(runner, tmp_path):
    config = tmp_path / 'config.json'
    config.write_text(json.dumps({'samples': 7}))
    result = invoke(runner, 'sample', '--config', config)
    assert result.exit_code == 1
    assert 'samples' in result.output


def test_invalid_concentration(runner):
    result = invoke(runner, 'sample', '--gamma', -1)
    assert result.exit_code == 1
    assert 'InputError' in result.output


def test_unwritable_output(runner, tmp_path):
    result = invoke(runner, 'sample', '--out', tmp_path / 'missing' / 'x.csv')
    assert result.exit_code == 1
    assert 'OutputError' in result.output


def test_verbose_prints_header(runner):
    result = runner.invoke(geonorm, ['--verbose', 'moments', '--p-max', '1'])
    assert result.exit_code == 0
    assert 'geonorm' in result.output
