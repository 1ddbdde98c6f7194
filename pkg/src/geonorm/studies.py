"""
    geonorm.studies

Builders for the numerical artefacts of the package: samples, variance
curves, Fisher constants, moment tables, MSE tables and CLT data.

Replications are independent tasks. Replication j of a study cell draws
from ``RngStream(seed).child(cell).child(j)``, so the seed of every task is
fixed before dispatch and the results do not depend on the number of
worker processes. Results are folded in replication order.
"""

import math
import logging
from dataclasses import dataclass, field, fields, replace
from datetime import datetime, timezone
from multiprocessing import Pool
from typing import Callable, Iterable

import numpy as np
import pandas as pd
from scipy import stats

from . import settings
from .constants import (
    CLT_COLUMNS,
    CLT_VARIANCE_LABEL,
    CORRELATION_COLUMN,
    CURVES_COLUMNS,
    DEFAULT_ESTIMATOR,
    DEFAULT_REPLICATIONS,
    DEFAULT_SAMPLE_SIZES,
    DETAIL_COLUMNS,
    ESTIMATOR_NAMES,
    FISHER_COLUMNS,
    MSE_COLUMNS,
    SAMPLE_COLUMNS,
    TABLE_ROWS,
)
from .errors import DomainError, EstimationError, InputError
from .estimation import fisher_info, fit_gn_mle, fit_gn_moments
from .geodesic_normal import (
    GnParams,
    extrinsic_variance,
    intrinsic_variance,
    sample_array,
    trig_moment,
)
from .geometry import geodesic_distance, signed_displacement
from .streams import RngStream
from .von_mises import (
    VmParams,
    vm_extrinsic_variance,
    vm_intrinsic_variance,
    vm_trig_moment,
)

logger = logging.getLogger('standard')

ESTIMATORS = dict(zip(ESTIMATOR_NAMES, (fit_gn_mle, fit_gn_moments)))


@dataclass
class StudyConfig:
    """
    Parameters of one CLI command. Built from the command-line flags and
    then overridden key by key from a JSON object.
    """
    mu: float = 0.0
    gamma: float = 1.0
    kappa: float | None = None
    n: int = 100
    reps: int = DEFAULT_REPLICATIONS
    seed: int = field(default_factory=lambda: settings.DEFAULT_SEED)
    out: str | None = None
    grid_min: float = 1e-4
    grid_max: float = 20.0
    grid_points: int = 100
    level: float = 0.95
    p_max: int = 5
    sizes: tuple[int, ...] = DEFAULT_SAMPLE_SIZES
    rows: tuple[tuple[float, float], ...] = TABLE_ROWS
    details: str | None = None
    workers: int = field(default_factory=lambda: settings.WORKERS)
    estimator: str = DEFAULT_ESTIMATOR

    def override(self, values: dict) -> 'StudyConfig':
        known = {item.name for item in fields(self)}
        unknown = sorted(set(values) - known)
        if unknown:
            raise InputError(f"unknown configuration keys: {', '.join(unknown)}")
        values = dict(values)
        if 'sizes' in values:
            values['sizes'] = tuple(int(size) for size in values['sizes'])
        if 'rows' in values:
            values['rows'] = tuple(
                (float(mu), float(gamma)) for mu, gamma in values['rows']
            )
        return replace(self, **values)

    def validate(self) -> 'StudyConfig':
        if not self.reps >= 1:
            raise InputError('reps must be >= 1')
        if not self.n >= 0:
            raise InputError('n must be >= 0')
        if not self.sizes or any(size < 1 for size in self.sizes):
            raise InputError('sample sizes must be >= 1')
        concentrations = [self.gamma] + [gamma for _, gamma in self.rows]
        if self.kappa is not None:
            concentrations.append(self.kappa)
        if not all(math.isfinite(c) and c > 0 for c in concentrations):
            raise InputError('concentrations must be finite and > 0')
        if not all(math.isfinite(mu) for mu in [self.mu] + [mu for mu, _ in self.rows]):
            raise InputError('angles must be finite')
        if not 0 < self.grid_min < self.grid_max:
            raise InputError('grid bounds must satisfy 0 < grid_min < grid_max')
        if self.grid_points < 2:
            raise InputError('grid_points must be >= 2')
        if not 0 < self.level < 1:
            raise InputError('level must lie in (0, 1)')
        if self.p_max < 1:
            raise InputError('p_max must be >= 1')
        if self.workers < 1:
            raise InputError('workers must be >= 1')
        if self.estimator not in ESTIMATORS:
            raise InputError(
                f"estimator must be one of {', '.join(ESTIMATOR_NAMES)}, "
                f"got {self.estimator!r}"
            )
        return self


@dataclass(frozen=True)
class Replication:
    index: int
    mu_hat: float = math.nan
    gamma_hat: float = math.nan
    signed_err_mu: float = math.nan
    sq_err_mu: float = math.nan
    sq_err_gamma: float = math.nan
    failure: str | None = None


def run_tasks(func: Callable, tasks: list, workers: int = 1) -> list:
    """Map `func` over `tasks` in order, on a process pool if workers > 1."""
    if workers <= 1 or len(tasks) < 2:
        return [func(task) for task in tasks]
    chunksize = max(1, len(tasks) // (4 * workers))
    with Pool(processes=workers) as pool:
        return pool.map(func, tasks, chunksize=chunksize)


def _replicate(task: tuple) -> Replication:
    mu_star, gamma_star, n, seed, index, estimator = task
    rng = RngStream(seed).child(index)
    values = sample_array(n, GnParams(mu_star, gamma_star), rng)
    try:
        fit = ESTIMATORS[estimator](values)
    except EstimationError as error:
        return Replication(index=index, failure=type(error).__name__)
    return Replication(
        index=index,
        mu_hat=fit.mu_hat.value,
        gamma_hat=fit.gamma_hat,
        signed_err_mu=signed_displacement(mu_star, fit.mu_hat),
        sq_err_mu=geodesic_distance(fit.mu_hat, mu_star) ** 2,
        sq_err_gamma=(fit.gamma_hat - gamma_star) ** 2,
    )


def replicate_fits(
        mu_star: float,
        gamma_star: float,
        n: int,
        reps: int,
        seed: int,
        workers: int = 1,
        estimator: str = DEFAULT_ESTIMATOR
) -> list[Replication]:
    """`reps` seeded gN samples of size `n`, each fitted by `estimator`."""
    tasks = [(mu_star, gamma_star, n, seed, j, estimator) for j in range(reps)]
    return run_tasks(_replicate, tasks, workers)


def sample_frame(config: StudyConfig) -> pd.DataFrame:
    values = sample_array(
        config.n, GnParams(config.mu, config.gamma), RngStream(config.seed)
    )
    return pd.DataFrame(
        {SAMPLE_COLUMNS[0]: np.arange(values.size), SAMPLE_COLUMNS[1]: values}
    )


def concentration_grid(config: StudyConfig) -> np.ndarray:
    return np.geomspace(config.grid_min, config.grid_max, config.grid_points)


def curves_frame(config: StudyConfig) -> pd.DataFrame:
    """Intrinsic and extrinsic variances of gN and vM on a shared log grid."""
    rows = []
    for c in concentration_grid(config):
        c = float(c)
        rows.append((
            c,
            intrinsic_variance(c),
            extrinsic_variance(GnParams(0.0, c)),
            vm_intrinsic_variance(c),
            vm_extrinsic_variance(c),
        ))
    return pd.DataFrame(rows, columns=list(CURVES_COLUMNS))


def fisher_frame(config: StudyConfig) -> pd.DataFrame:
    """Asymptotic variance constants 1/J_1 and 1/J_2 along the grid."""
    rows = []
    for gamma in concentration_grid(config):
        j1, j2 = fisher_info(float(gamma))
        rows.append((float(gamma), 1.0 / j1, 1.0 / j2))
    return pd.DataFrame(rows, columns=list(FISHER_COLUMNS))


def moments_table(config: StudyConfig) -> dict:
    """
    Means, variances and trigonometric moments of gN(mu, gamma) next to
    those of vM(mu, kappa); kappa defaults to gamma.
    """
    params = GnParams(config.mu, config.gamma)
    kappa = config.gamma if config.kappa is None else config.kappa
    vm = VmParams(config.mu, kappa)
    table = {
        'mu': params.mu.value,
        'gamma': params.gamma,
        'kappa': vm.kappa,
        'gn_intrinsic_mean': params.mu.value,
        'gn_extrinsic_mean': params.mu.value,
        'gn_intrinsic_variance': intrinsic_variance(params.gamma),
        'gn_extrinsic_variance': extrinsic_variance(params),
    }
    for p in range(1, config.p_max + 1):
        moment = trig_moment(p, params)
        table[f'gn_phi{p}_re'] = moment.re
        table[f'gn_phi{p}_im'] = moment.im
        table[f'gn_phi{p}_resultant_length'] = moment.resultant_length
        table[f'gn_phi{p}_direction'] = moment.direction.value
    table.update({
        'vm_intrinsic_mean': vm.mu.value,
        'vm_extrinsic_mean': vm.mu.value,
        'vm_intrinsic_variance': vm_intrinsic_variance(vm.kappa),
        'vm_extrinsic_variance': vm_extrinsic_variance(vm.kappa),
    })
    for p in (1, 2):
        value = vm_trig_moment(p, vm)
        table[f'vm_phi{p}_re'] = value.real
        table[f'vm_phi{p}_im'] = value.imag
    return table


def summarize_cell(
        mu_star: float,
        gamma_star: float,
        n: int,
        replications: list[Replication]
) -> dict:
    done = [r for r in replications if r.failure is None]
    failures = len(replications) - len(done)
    mse_mu = mse_gamma = corr = math.nan
    if done:
        mse_mu = float(np.mean([r.sq_err_mu for r in done]))
        mse_gamma = float(np.mean([r.sq_err_gamma for r in done]))
    if len(done) >= 2:
        mu_errors = np.array([r.signed_err_mu for r in done])
        gamma_errors = np.array([r.gamma_hat - gamma_star for r in done])
        if np.std(mu_errors) > 0 and np.std(gamma_errors) > 0:
            corr = float(np.corrcoef(mu_errors, gamma_errors)[0, 1])
    if failures:
        logger.warning(
            '%d of %d fits failed at mu*=%.6g gamma*=%.6g n=%d',
            failures, len(replications), mu_star, gamma_star, n
        )
    return dict(zip(MSE_COLUMNS + (CORRELATION_COLUMN,), (
        mu_star, gamma_star, n, len(replications), mse_mu, mse_gamma,
        failures, corr
    )))


def detail_frame(
        mu_star: float,
        gamma_star: float,
        n: int,
        replications: list[Replication]
) -> pd.DataFrame:
    rows = [
        (mu_star, gamma_star, n, r.index, r.mu_hat, r.gamma_hat,
         r.sq_err_mu, r.sq_err_gamma)
        for r in replications
    ]
    return pd.DataFrame(rows, columns=list(DETAIL_COLUMNS))


def mse_study(
        config: StudyConfig,
        on_cell: Callable[[pd.DataFrame, pd.DataFrame], None] | None = None
) -> pd.DataFrame:
    """
    Empirical MSE of (mu_hat, gamma_hat) over the grid rows x sizes.

    The angular error is the squared geodesic distance d_G(mu_hat, mu*)^2.
    Fits that raise an estimation error are counted in `failures` and left
    out of the averages. `on_cell(summary_row, details)` is called after
    every cell with the CSV columns only, so callers can flush partial
    results. The returned table also carries `corr_mu_gamma`.
    """
    summaries = []
    cell = 0
    for mu_star, gamma_star in config.rows:
        for n in config.sizes:
            cell_seed = RngStream(config.seed).child(cell).seed
            replications = replicate_fits(
                mu_star, gamma_star, n, config.reps, cell_seed, config.workers,
                config.estimator
            )
            summary = pd.DataFrame(
                [summarize_cell(mu_star, gamma_star, n, replications)],
                columns=list(MSE_COLUMNS) + [CORRELATION_COLUMN]
            )
            summaries.append(summary)
            if on_cell is not None:
                on_cell(
                    summary[list(MSE_COLUMNS)],
                    detail_frame(mu_star, gamma_star, n, replications)
                )
            logger.debug('mse cell %d done (n=%d)', cell, n)
            cell += 1
    return pd.concat(summaries, ignore_index=True)


def mse_metadata(config: StudyConfig, table: pd.DataFrame) -> dict:
    """Sidecar of an MSE table; `corr_mu_gamma` lists one value per CSV row."""
    return {
        'estimator': config.estimator,
        'seed': config.seed,
        'm': config.reps,
        'cells': len(table),
        CORRELATION_COLUMN: table[CORRELATION_COLUMN].tolist(),
        'created': datetime.now(timezone.utc).isoformat(timespec='seconds'),
    }


def clt_study(config: StudyConfig) -> tuple[pd.DataFrame, dict]:
    """
    Standardized errors sqrt(n) * signed_displacement(mu*, mu_hat) over
    `reps` replications, and a metadata dictionary comparing them with
    the limiting law N(0, 1/J_1(gamma*)).
    """
    replications = replicate_fits(
        config.mu, config.gamma, config.n, config.reps, config.seed,
        config.workers, config.estimator
    )
    done = [r for r in replications if r.failure is None]
    if len(done) < 2:
        raise DomainError('too few successful replications for a CLT study')
    errors = math.sqrt(config.n) * np.array([r.signed_err_mu for r in done])
    frame = pd.DataFrame(
        {CLT_COLUMNS[0]: [r.index for r in done], CLT_COLUMNS[1]: errors}
    )
    j1, _ = fisher_info(config.gamma)
    variance = 1.0 / j1
    ks = stats.kstest(errors, 'norm', args=(0.0, math.sqrt(variance)))
    metadata = {
        'estimator': config.estimator,
        'mu_star': GnParams(config.mu, config.gamma).mu.value,
        'gamma_star': config.gamma,
        'n': config.n,
        'm': config.reps,
        'seed': config.seed,
        'failures': len(replications) - len(done),
        'variance': variance,
        'empirical_variance': float(np.var(errors, ddof=1)),
        'ks_statistic': float(ks.statistic),
        'ks_pvalue': float(ks.pvalue),
        'created': datetime.now(timezone.utc).isoformat(timespec='seconds'),
    }
    return frame, metadata


def clt_output_frame(frame: pd.DataFrame, variance: float) -> pd.DataFrame:
    """`frame` followed by the row ``variance,<1/J_1(gamma*)>``."""
    trailer = pd.DataFrame(
        {CLT_COLUMNS[0]: [CLT_VARIANCE_LABEL], CLT_COLUMNS[1]: [variance]}
    )
    body = frame.astype({CLT_COLUMNS[0]: object})
    return pd.concat([body, trailer], ignore_index=True)


def parse_sizes(text: str | Iterable[int]) -> tuple[int, ...]:
    """'10,20,50' -> (10, 20, 50)."""
    if not isinstance(text, str):
        return tuple(int(size) for size in text)
    try:
        return tuple(int(part) for part in text.split(',') if part.strip())
    except ValueError as error:
        raise InputError(f"invalid sample sizes {text!r}") from error
