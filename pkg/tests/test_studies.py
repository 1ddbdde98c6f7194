import math
import unittest
from dataclasses import replace

import numpy as np
import pandas as pd
import pytest
from pandas.testing import assert_frame_equal

from geonorm.constants import (
    CURVES_COLUMNS,
    FISHER_COLUMNS,
    MSE_COLUMNS,
    SAMPLE_COLUMNS,
)
from geonorm.errors import InputError
from geonorm.estimation import fisher_info
from geonorm.geodesic_normal import GnParams, extrinsic_variance, intrinsic_variance
from geonorm.studies import (
    Replication,
    StudyConfig,
    clt_output_frame,
    clt_study,
    curves_frame,
    fisher_frame,
    moments_table,
    mse_metadata,
    mse_study,
    parse_sizes,
    replicate_fits,
    sample_frame,
    summarize_cell,
)


class TestStudyConfig(unittest.TestCase):
    def test_defaults_are_valid(self):
        config = StudyConfig().validate()
        self.assertEqual(config.sizes, (10, 20, 50, 100, 500))
        self.assertEqual(len(config.rows), 4)

    def test_override(self):
        config = StudyConfig(n=3).override({'n': 7, 'sizes': [5, 6]})
        self.assertEqual(config.n, 7)
        self.assertEqual(config.sizes, (5, 6))

    def test_unknown_key(self):
        with self.assertRaises(InputError):
            StudyConfig().override({'replications': 10})

    def test_validation(self):
        bad = [
            {'reps': 0}, {'sizes': (10, 0)}, {'gamma': 0.0}, {'gamma': -2.0},
            {'grid_min': 2.0, 'grid_max': 1.0}, {'grid_min': 0.0},
            {'grid_points': 1}, {'level': 1.0}, {'p_max': 0}, {'kappa': -1.0},
            {'estimator': 'bayes'},
        ]
        for values in bad:
            with self.assertRaises(InputError):
                StudyConfig(**values).validate()

    def test_parse_sizes(self):
        self.assertEqual(parse_sizes('10, 20,50'), (10, 20, 50))
        self.assertEqual(parse_sizes([3, 4]), (3, 4))
        with self.assertRaises(InputError):
            parse_sizes('10,x')


def test_sample_frame_is_deterministic():
    config = StudyConfig(mu=1.0, gamma=3.0, n=25, seed=42)
    first = sample_frame(config)
    assert list(first.columns) == list(SAMPLE_COLUMNS)
    assert_frame_equal(first, sample_frame(config))
    assert first['index'].tolist() == list(range(25))
    assert sample_frame(StudyConfig(n=0)).empty


def test_parallel_replications_match_serial():
    serial = replicate_fits(1.0, 2.0, 20, 8, seed=77, workers=1)
    parallel = replicate_fits(1.0, 2.0, 20, 8, seed=77, workers=2)
    assert serial == parallel
    assert [r.index for r in serial] == list(range(8))


def test_curves_frame():
    frame = curves_frame(StudyConfig(grid_min=1e-4, grid_max=20.0, grid_points=30))
    assert list(frame.columns) == list(CURVES_COLUMNS)
    first = frame.iloc[0]
    assert first['concentration'] == pytest.approx(1e-4)
    assert first['gn_var_I'] == pytest.approx(math.pi ** 2 / 3, abs=1e-3)
    assert first['vm_var_I'] == pytest.approx(math.pi ** 2 / 3, abs=1e-3)
    assert first['gn_var_E'] == pytest.approx(1.0, abs=1e-3)
    for column in CURVES_COLUMNS[1:]:
        assert np.all(np.diff(frame[column].to_numpy()) < 0)


def test_fisher_frame_shapes():
    frame = fisher_frame(StudyConfig(grid_min=1e-3, grid_max=1e3, grid_points=25))
    assert list(frame.columns) == list(FISHER_COLUMNS)
    assert np.all(np.diff(frame['inv_j1'].to_numpy()) < 0)
    assert np.all(np.diff(frame['inv_j2'].to_numpy()) > 0)
    j1, j2 = fisher_info(float(frame['concentration'].iloc[3]))
    assert frame['inv_j1'].iloc[3] == pytest.approx(1 / j1)
    assert frame['inv_j2'].iloc[3] == pytest.approx(1 / j2)


def test_moments_table():
    table = moments_table(StudyConfig(mu=3 * math.pi / 4, gamma=2.0, p_max=3))
    assert table['kappa'] == 2.0
    assert table['gn_intrinsic_variance'] == intrinsic_variance(2.0)
    assert table['gn_extrinsic_variance'] == extrinsic_variance(GnParams(3 * math.pi / 4, 2.0))
    assert table['gn_phi1_resultant_length'] == pytest.approx(
        1 - table['gn_extrinsic_variance']
    )
    assert 'gn_phi3_re' in table and 'gn_phi4_re' not in table
    assert table['gn_phi2_direction'] == pytest.approx(3 * math.pi / 2)
    assert table['vm_intrinsic_variance'] > table['gn_intrinsic_variance'] * 0.5


def test_single_replication_summary():
    replication = Replication(
        index=0, mu_hat=1.1, gamma_hat=2.5, signed_err_mu=0.1,
        sq_err_mu=0.01, sq_err_gamma=0.25
    )
    row = summarize_cell(1.0, 2.0, 10, [replication])
    assert row['m'] == 1
    assert row['mse_mu'] == 0.01
    assert row['mse_gamma'] == 0.25
    assert row['failures'] == 0
    assert math.isnan(row['corr_mu_gamma'])


def test_failures_are_counted():
    failed = Replication(index=1, failure='GammaNotIdentifiable')
    done = Replication(index=0, mu_hat=1.0, gamma_hat=2.0, signed_err_mu=0.0,
                       sq_err_mu=0.0, sq_err_gamma=0.0)
    row = summarize_cell(1.0, 2.0, 10, [done, failed])
    assert row['failures'] == 1
    assert row['mse_mu'] == 0.0


def test_mse_study_small_grid():
    config = StudyConfig(rows=((1.0, 2.0),), sizes=(10, 50), reps=20, seed=5)
    cells, summaries = [], []

    def collect(summary, details):
        summaries.append(summary)
        cells.append(details)
    table = mse_study(config, on_cell=collect)
    assert list(table.columns) == list(MSE_COLUMNS) + ['corr_mu_gamma']
    assert all(list(summary.columns) == list(MSE_COLUMNS) for summary in summaries)
    assert table['n'].tolist() == [10, 50]
    assert len(cells) == 2 and all(len(details) == 20 for details in cells)
    assert_frame_equal(table, mse_study(config))
    assert table['mse_mu'].iloc[1] == pytest.approx(cells[1]['sq_err_mu'].mean())


def test_moment_estimator_labels_the_same_fits():
    config = StudyConfig(rows=((4.0, 3.0),), sizes=(15,), reps=10, seed=8)
    mle = mse_study(config)
    moments = mse_study(replace(config, estimator='moments'))
    assert_frame_equal(mle, moments)
    metadata = mse_metadata(replace(config, estimator='moments'), moments)
    assert metadata['estimator'] == 'moments'
    assert metadata['cells'] == 1
    assert metadata['corr_mu_gamma'] == moments['corr_mu_gamma'].tolist()


@pytest.mark.slow
def test_table_values_at_desk_scale():
    config = StudyConfig(
        rows=((3 * math.pi / 4, 1.0), (7 * math.pi / 4, 10.0)),
        sizes=(500,), reps=1000, seed=20100
    )
    table = mse_study(config).set_index('gamma_star')
    assert 0.0010 <= table.loc[1.0, 'mse_mu'] <= 0.0040
    assert 0.0023 <= table.loc[1.0, 'mse_gamma'] <= 0.0092
    assert 0.0001 <= table.loc[10.0, 'mse_mu'] <= 0.0004
    assert 0.21 <= table.loc[10.0, 'mse_gamma'] <= 0.84
    assert (table['failures'] == 0).all()
    assert (table['corr_mu_gamma'].abs() <= 0.1).all()


@pytest.mark.slow
def test_mse_decreases_with_sample_size():
    table = mse_study(StudyConfig(reps=1000, seed=20100))
    for _, cell in table.groupby(['mu_star', 'gamma_star']):
        cell = cell.sort_values('n')
        for column in ('mse_mu', 'mse_gamma'):
            values = cell[column].to_numpy()
            assert np.all(values[1:] <= 1.5 * values[:-1])


@pytest.mark.slow
def test_clt_study():
    config = StudyConfig(mu=3 * math.pi / 4, gamma=1.0, n=500, reps=2000, seed=20100)
    frame, metadata = clt_study(config)
    j1, _ = fisher_info(1.0)
    assert len(frame) == 2000
    assert metadata['variance'] == 1 / j1
    assert metadata['ks_pvalue'] > 0.01
    assert abs(metadata['empirical_variance'] / metadata['variance'] - 1) <= 0.1


def test_clt_study_small():
    frame, metadata = clt_study(StudyConfig(mu=1.0, gamma=2.0, n=30, reps=40, seed=1))
    assert list(frame.columns) == ['replication', 'standardized_error']
    assert metadata['m'] == 40 and metadata['failures'] == 0
    assert 0.0 <= metadata['ks_statistic'] <= 1.0
    assert isinstance(frame, pd.DataFrame)
    assert metadata['estimator'] == 'mle'


def test_clt_output_ends_with_variance_row():
    frame, metadata = clt_study(StudyConfig(mu=2.0, gamma=3.0, n=25, reps=12, seed=9))
    output = clt_output_frame(frame, metadata['variance'])
    assert len(output) == len(frame) + 1
    assert output['replication'].iloc[-1] == 'variance'
    assert output['standardized_error'].iloc[-1] == metadata['variance']
    assert output['replication'].iloc[:-1].tolist() == frame['replication'].tolist()
