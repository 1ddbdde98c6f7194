"""
    Command line interface of geonorm.

    geonorm sample | fit | moments | curves | fisher-curves | mse-study | clt-study

Every command accepts ``--config FILE``: a JSON object whose keys
override the corresponding flags. Exit status is 0 on success, 2 when an
estimation error is raised and 1 for input, output or configuration
problems.
"""
import re
import math
import logging
import functools

import click

from . import settings
from .errors import EstimationError, GeonormError, InputError
from .estimation import asymptotic_ci, fit_gn_mle
from .settings import HEADER
from .studies import (
    ESTIMATORS,
    StudyConfig,
    clt_output_frame,
    clt_study,
    curves_frame,
    fisher_frame,
    moments_table,
    mse_metadata,
    mse_study,
    parse_sizes,
    sample_frame,
)
from .utils import (
    read_angles_csv,
    read_json,
    sidecar_path,
    write_csv,
    write_json,
)
from .von_mises import vm_fit_moments

logger_client = logging.getLogger('client')

_PI_FORM = re.compile(
    r'^\s*(?P<coef>[+-]?(?:\d+(?:\.\d*)?|\.\d+)?)\s*\*?\s*pi\s*'
    r'(?:/\s*(?P<den>\d+(?:\.\d*)?))?\s*$'
)


class AngleType(click.ParamType):
    """Radians, either a number or a multiple of pi such as ``3pi/4``."""
    name = 'angle'

    def convert(self, value, param, ctx):
        if isinstance(value, (int, float)):
            return float(value)
        match = _PI_FORM.match(value)
        if match:
            coef = match.group('coef')
            coef = 1.0 if coef in ('', '+') else -1.0 if coef == '-' else float(coef)
            den = float(match.group('den') or 1.0)
            return coef * math.pi / den
        try:
            return float(value)
        except ValueError:
            self.fail(f"{value!r} is not an angle", param, ctx)


ANGLE = AngleType()


def build_config(config_path, **flags) -> StudyConfig:
    """StudyConfig from the given flags, then the JSON overrides."""
    flags = {key: value for key, value in flags.items() if value is not None}
    if 'sizes' in flags:
        flags['sizes'] = parse_sizes(flags['sizes'])
    config = StudyConfig(**flags)
    if config_path is not None:
        overrides = read_json(config_path)
        if 'mu' in overrides:
            try:
                overrides['mu'] = ANGLE.convert(overrides['mu'], None, None)
            except click.BadParameter as error:
                raise InputError(error.message) from error
        config = config.override(overrides)
    return config.validate()


def handle_errors(command):
    """Map package errors to exit codes."""
    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except EstimationError as error:
            click.echo(f"{type(error).__name__}: {error}", err=True)
            raise SystemExit(2)
        except (GeonormError, OSError) as error:
            click.echo(f"{type(error).__name__}: {error}", err=True)
            raise SystemExit(1)
    return wrapper


def config_option(command):
    return click.option(
        '--config', 'config_path', type=click.Path(dir_okay=False),
        default=None, help='JSON object overriding the flags.'
    )(command)


def estimator_option(command):
    return click.option(
        '--estimator', type=click.Choice(sorted(ESTIMATORS)), default=None,
        help='Fit used in every replication (default mle).'
    )(command)


@click.group()
@click.option('--verbose', is_flag=True, help='Debug logging and header.')
def geonorm(verbose=False):
    """Geodesic Normal distribution on the circle."""
    if verbose:
        click.echo(HEADER, err=True)
        for name in ('client', 'standard'):
            for handler in logging.getLogger(name).handlers:
                handler.setLevel(logging.DEBUG)
        logger_client.debug('Log level set to DEBUG (default %s)', settings.LOG_LEVEL)


@geonorm.command()
@click.option('--mu', type=ANGLE, default=None, help='Location (radians or e.g. 3pi/4).')
@click.option('--gamma', type=float, default=None, help='Concentration > 0.')
@click.option('--n', type=int, default=None, help='Sample size.')
@click.option('--seed', type=int, default=None, help='Seed (default $GEONORM_SEED).')
@click.option('--out', type=click.Path(dir_okay=False), default=None)
@config_option
@handle_errors
def sample(config_path, **flags):
    """Draw a gN(mu, gamma) sample as CSV `index,theta`."""
    config = build_config(config_path, **flags)
    frame = sample_frame(config)
    write_csv(frame, config.out)
    logger_client.debug('Wrote %d angles', len(frame))


@geonorm.command()
@click.argument('input_path', type=click.Path(dir_okay=False))
@click.option('--level', type=float, default=None, help='Confidence level.')
@click.option('--out', type=click.Path(dir_okay=False), default=None)
@config_option
@handle_errors
def fit(input_path, config_path, **flags):
    """Maximum likelihood fit of gN to the angles in INPUT_PATH."""
    config = build_config(config_path, **flags)
    values = read_angles_csv(input_path)
    result = fit_gn_mle(values)
    intervals = asymptotic_ci(result, result.n, config.level)
    report = {
        'n': result.n,
        'mu_hat': result.mu_hat.value,
        'gamma_hat': result.gamma_hat,
        'se_mu': result.se_mu,
        'se_gamma': result.se_gamma,
        'log_likelihood': result.log_likelihood,
        'mean_set_multiplicity': result.mean_set_multiplicity,
        'intrinsic_variance': result.intrinsic_variance,
        'fisher_j1': result.fisher_j1,
        'fisher_j2': result.fisher_j2,
        'at_boundary': result.at_boundary,
        'level': intervals.level,
        'ci_mu_lower': intervals.mu_lower.value,
        'ci_mu_upper': intervals.mu_upper.value,
        'ci_mu_covers_circle': intervals.mu_covers_circle,
        'ci_gamma_lower': intervals.gamma_lower,
        'ci_gamma_upper': intervals.gamma_upper,
        'vm_mu_hat': None,
        'vm_kappa_hat': None,
        'vm_error': None,
    }
    try:
        vm = vm_fit_moments(values)
        report['vm_mu_hat'] = vm.mu.value
        report['vm_kappa_hat'] = vm.kappa
    except EstimationError as error:
        logger_client.debug('von Mises fit failed: %s', error)
        report['vm_error'] = f"{type(error).__name__}: {error}"
    if result.mean_set_multiplicity > 1:
        logger_client.warning(
            'Intrinsic mean set has %d elements; reporting the smallest angle',
            result.mean_set_multiplicity
        )
    write_json(report, config.out)


@geonorm.command()
@click.option('--mu', type=ANGLE, default=None)
@click.option('--gamma', type=float, default=None)
@click.option('--kappa', type=float, default=None, help='vM concentration (default gamma).')
@click.option('--p-max', 'p_max', type=int, default=None, help='Highest gN moment order.')
@click.option('--out', type=click.Path(dir_okay=False), default=None)
@config_option
@handle_errors
def moments(config_path, **flags):
    """Means, variances and trigonometric moments of gN and vM as JSON."""
    config = build_config(config_path, **flags)
    write_json(moments_table(config), config.out)


def grid_options(command):
    for option in reversed((
        click.option('--grid-min', 'grid_min', type=float, default=None),
        click.option('--grid-max', 'grid_max', type=float, default=None),
        click.option('--grid-points', 'grid_points', type=int, default=None),
        click.option('--out', type=click.Path(dir_okay=False), default=None),
    )):
        command = option(command)
    return command


@geonorm.command()
@grid_options
@config_option
@handle_errors
def curves(config_path, **flags):
    """Intrinsic/extrinsic variances of gN and vM along a log grid."""
    config = build_config(config_path, **flags)
    write_csv(curves_frame(config), config.out)


@geonorm.command('fisher-curves')
@grid_options
@config_option
@handle_errors
def fisher_curves(config_path, **flags):
    """Asymptotic variances 1/J_1 and 1/J_2 along a log grid."""
    config = build_config(config_path, **flags)
    write_csv(fisher_frame(config), config.out)


@geonorm.command('mse-study')
@click.option('--mu', type=ANGLE, default=None, help='Single row location.')
@click.option('--gamma', type=float, default=None, help='Single row concentration.')
@click.option('--n', type=int, default=None, help='Single sample size.')
@click.option('--sizes', type=str, default=None, help='Sample sizes, e.g. 10,20,50.')
@click.option('--reps', type=int, default=None, help='Replications per cell.')
@click.option('--seed', type=int, default=None)
@click.option('--out', type=click.Path(dir_okay=False), required=True)
@click.option('--details', type=click.Path(dir_okay=False), default=None,
              help='Per-replication CSV.')
@estimator_option
@config_option
@handle_errors
def mse_study_command(config_path, **flags):
    """Empirical MSE of (mu_hat, gamma_hat) over a grid of cells."""
    mu, gamma, n = flags.pop('mu'), flags.pop('gamma'), flags.pop('n')
    if mu is not None or gamma is not None:
        flags['rows'] = ((mu or 0.0, 1.0 if gamma is None else gamma),)
    if n is not None:
        flags['sizes'] = (n,)
    config = build_config(config_path, **flags)
    first = {'summary': True, 'details': True}

    def flush(summary, details):
        write_csv(summary, config.out, append=not first['summary'])
        first['summary'] = False
        if config.details is not None:
            write_csv(details, config.details, append=not first['details'])
            first['details'] = False

    try:
        table = mse_study(config, on_cell=flush)
    except KeyboardInterrupt:
        logger_client.warning('Interrupted; partial results are in %s', config.out)
        raise SystemExit(130)
    write_json(mse_metadata(config, table), sidecar_path(config.out))
    logger_client.info('Wrote %d MSE rows to %s', len(table), config.out)


@geonorm.command('clt-study')
@click.option('--mu', type=ANGLE, default=None)
@click.option('--gamma', type=float, default=None)
@click.option('--n', type=int, default=None)
@click.option('--reps', type=int, default=None)
@click.option('--seed', type=int, default=None)
@click.option('--out', type=click.Path(dir_okay=False), required=True)
@estimator_option
@config_option
@handle_errors
def clt_study_command(config_path, **flags):
    """Standardized errors of mu_hat and a KS comparison with N(0, 1/J_1)."""
    config = build_config(config_path, **flags)
    frame, metadata = clt_study(config)
    write_csv(clt_output_frame(frame, metadata['variance']), config.out)
    write_json(metadata, sidecar_path(config.out))
    logger_client.info(
        'KS statistic %.4f (p=%.3g) against N(0, %.6g)',
        metadata['ks_statistic'], metadata['ks_pvalue'], metadata['variance']
    )
