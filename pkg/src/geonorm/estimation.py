"""
    geonorm.estimation

Sample statistics on the circle and maximum likelihood for gN.

The intrinsic (Frechet) sample mean set is found exactly: on S^1 every
local minimiser of F(m) = mean d_G(m, theta_i)^2 is the arithmetic mean of
the sample unwrapped at one of the n cut positions between consecutive
sorted angles. All n candidates are scored with prefix sums, the valid
ones (every unwrapped point within pi of the candidate) are kept, and the
near-optimal ones are re-scored directly.

The MLE of mu is that mean set; the MLE of gamma solves
V(gamma) = sigma_I^2, V being strictly decreasing.
"""

import math
import logging
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np
from scipy.optimize import brentq

from .constants import (
    TWO_PI,
    UNIFORM_INTRINSIC_VARIANCE,
    FRECHET_TIE_TOL,
    FRECHET_VALIDITY_SLACK,
    ZERO_RESULTANT_TOL,
    GAMMA_BRACKET,
    GAMMA_MAX_ITER,
    GAMMA_SECANT_STEPS,
    GAMMA_RESIDUAL_TOL,
    IDENTIFIABILITY_MARGIN,
)
from .errors import (
    DomainError,
    DegenerateSample,
    EmptySample,
    GammaNotIdentifiable,
)
from .geodesic_normal import (
    fourth_moment,
    intrinsic_variance,
    intrinsic_variance_derivative,
    log_norm_const,
)
from .geometry import (
    Angle,
    AngleLike,
    as_array,
    canonicalize,
    geodesic_distance_array,
    signed_displacement,
)
from .special import norm_cdf_inv

logger = logging.getLogger('standard')


@dataclass(frozen=True)
class SampleMoment:
    """Empirical trigonometric moment mean(exp(i p theta_j))."""
    p: int
    value: complex
    resultant_length: float
    direction: Angle | None  # None when the resultant length vanishes


@dataclass(frozen=True)
class CircularSummary:
    n: int
    intrinsic_mean_set: tuple[Angle, ...]
    intrinsic_variance: float
    extrinsic_mean: Angle | None
    resultant_length: float
    extrinsic_variance: float

    @property
    def intrinsic_mean(self) -> Angle:
        return self.intrinsic_mean_set[0]


@dataclass(frozen=True)
class MleFit:
    mu_hat: Angle
    gamma_hat: float
    log_likelihood: float
    fisher_j1: float
    fisher_j2: float
    se_mu: float
    se_gamma: float
    mean_set_multiplicity: int
    n: int = 0
    intrinsic_variance: float = math.nan
    mean_set: tuple[Angle, ...] = field(default_factory=tuple)
    at_boundary: bool = False

    # the Fisher matrix is diagonal: the (mu, gamma) entry vanishes
    fisher_off_diagonal: float = 0.0


@dataclass(frozen=True)
class ConfidenceIntervals:
    level: float
    z: float
    mu_lower: Angle
    mu_upper: Angle
    mu_half_width: float
    mu_covers_circle: bool
    gamma_lower: float
    gamma_upper: float

    def covers_mu(self, mu: AngleLike, mu_hat: AngleLike) -> bool:
        if self.mu_covers_circle:
            return True
        return abs(signed_displacement(mu_hat, mu)) <= self.mu_half_width


def _values(sample: Iterable[AngleLike] | np.ndarray) -> np.ndarray:
    values = as_array(sample)
    if values.size == 0:
        raise EmptySample()
    return values


def frechet_objective(m: AngleLike, sample) -> float:
    """F(m) = (1/n) sum d_G(m, theta_i)^2."""
    values = _values(sample)
    dist = geodesic_distance_array(m, values)
    return float(np.mean(dist * dist))


def _frechet_candidates(values: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    x = np.sort(values)
    n = x.size
    cuts = np.arange(n)
    prefix = np.concatenate(([0.0], np.cumsum(x)[:-1]))
    total, total_sq = x.sum(), np.dot(x, x)
    # the first j sorted points are moved up by 2 pi
    means = (total + TWO_PI * cuts) / n
    sq = (total_sq + 2.0 * TWO_PI * prefix + TWO_PI * TWO_PI * cuts) / n
    scores = sq - means * means
    lowest = x
    highest = np.where(cuts > 0, np.roll(x, 1) + TWO_PI, x[-1])
    valid = (lowest >= means - math.pi - FRECHET_VALIDITY_SLACK) & \
        (highest <= means + math.pi + FRECHET_VALIDITY_SLACK)
    if not np.any(valid):  # not expected; score every candidate directly
        logger.warning('No valid Frechet cut found; scoring all candidates')
        valid[:] = True
    return means[valid], scores[valid]


def intrinsic_sample_mean(sample) -> list[Angle]:
    """
    Intrinsic (Frechet) sample mean set in ascending order.

    Every returned angle minimises F to within 1e-9 and every global
    minimiser is returned.

    Raises
    ------
    EmptySample
        If the sample is empty.
    """
    values = _values(sample)
    means, scores = _frechet_candidates(values)
    shortlist = means[scores <= scores.min() + 1e3 * FRECHET_TIE_TOL]
    exact = np.array([frechet_objective(m, values) for m in shortlist])
    winners = np.sort(
        np.mod(shortlist[exact <= exact.min() + FRECHET_TIE_TOL], TWO_PI)
    )
    mean_set = []
    for value in winners:
        angle = canonicalize(value)
        if mean_set and abs(signed_displacement(mean_set[-1], angle)) <= FRECHET_TIE_TOL:
            continue
        mean_set.append(angle)
    if len(mean_set) > 1 and \
            abs(signed_displacement(mean_set[-1], mean_set[0])) <= FRECHET_TIE_TOL:
        mean_set.pop()  # same point seen on both sides of zero
    return mean_set


def empirical_trig_moment(sample, p: int = 1) -> SampleMoment:
    values = _values(sample)
    value = complex(np.mean(np.cos(p * values)), np.mean(np.sin(p * values)))
    rho = abs(value)
    direction = None
    if rho > ZERO_RESULTANT_TOL:
        direction = canonicalize(math.atan2(value.imag, value.real))
    return SampleMoment(p=p, value=value, resultant_length=rho, direction=direction)


def extrinsic_sample_mean(sample) -> Angle | None:
    """Direction of the first empirical trigonometric moment (None if rho = 0)."""
    return empirical_trig_moment(sample, 1).direction


def circular_summary(sample) -> CircularSummary:
    """Intrinsic and extrinsic sample means and variances."""
    values = _values(sample)
    mean_set = intrinsic_sample_mean(values)
    moment = empirical_trig_moment(values, 1)
    rho = min(1.0, moment.resultant_length)
    return CircularSummary(
        n=int(values.size),
        intrinsic_mean_set=tuple(mean_set),
        intrinsic_variance=frechet_objective(mean_set[0], values),
        extrinsic_mean=moment.direction,
        resultant_length=rho,
        extrinsic_variance=1.0 - rho,
    )


def invert_intrinsic_variance(sigma2: float) -> float:
    """
    gamma such that V(gamma) = sigma2.

    Brent's method on log(gamma) over GAMMA_BRACKET, then secant polishing
    started from a tangent step with the analytic V'. Below V(1e8) the
    Gaussian regime V = 1/gamma is exact to double precision and 1/sigma2
    is returned.

    Raises
    ------
    DegenerateSample
        If sigma2 is not positive.
    GammaNotIdentifiable
        If sigma2 >= pi^2/3, the uniform-limit variance.
    """
    if not math.isfinite(sigma2):
        raise DomainError('intrinsic variance must be finite')
    if sigma2 <= 0.0:
        raise DegenerateSample('intrinsic sample variance is zero')
    if sigma2 >= UNIFORM_INTRINSIC_VARIANCE:
        raise GammaNotIdentifiable(
            f"intrinsic sample variance {sigma2:.12g} is not below pi^2/3; "
            "the sample is at least as spread as the uniform law"
        )
    low, high = GAMMA_BRACKET
    if sigma2 >= intrinsic_variance(low):
        return low
    if sigma2 <= intrinsic_variance(high):
        return 1.0 / sigma2

    def residual(t):
        return intrinsic_variance(math.exp(t)) - sigma2

    t = brentq(
        residual, math.log(low), math.log(high),
        xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=GAMMA_MAX_ITER
    )
    gamma = math.exp(t)
    error = intrinsic_variance(gamma) - sigma2
    # secant polish, seeded with a tangent step from the analytic V'
    previous = gamma - error / intrinsic_variance_derivative(gamma)
    if not previous > 0:
        return gamma
    previous_error = intrinsic_variance(previous) - sigma2
    if abs(previous_error) < abs(error):
        gamma, previous, error, previous_error = previous, gamma, previous_error, error
    for _ in range(GAMMA_SECANT_STEPS):
        if abs(error) <= GAMMA_RESIDUAL_TOL or error == previous_error:
            break
        candidate = gamma - error * (gamma - previous) / (error - previous_error)
        if not candidate > 0:
            break
        candidate_error = intrinsic_variance(candidate) - sigma2
        if abs(candidate_error) >= abs(error):
            break
        previous, previous_error = gamma, error
        gamma, error = candidate, candidate_error
    return gamma


def fisher_info(gamma: float) -> tuple[float, float]:
    """
    Diagonal of the per-observation Fisher information of gN(mu, gamma):

        J_1 = gamma (1 - 2 pi exp(-gamma pi^2/2)/k(gamma)) = gamma^2 V(gamma)
        J_2 = k''/k - (k'/k)^2 = (E[d^4] - V^2)/4 = -V'(gamma)/2
    """
    variance = intrinsic_variance(gamma)
    j1 = gamma * gamma * variance
    j2 = 0.25 * (fourth_moment(gamma) - variance * variance)
    return j1, j2


def log_likelihood(mu: AngleLike, gamma: float, sample) -> float:
    """-n log k(gamma) - gamma/2 sum d_G(mu, theta_i)^2."""
    values = _values(sample)
    dist = geodesic_distance_array(mu, values)
    return -values.size * log_norm_const(gamma) - 0.5 * gamma * float(np.dot(dist, dist))


def fit_gn_mle(sample) -> MleFit:
    """
    Maximum likelihood fit of gN.

    mu_hat is the smallest angle of the intrinsic sample mean set (its size
    is reported as `mean_set_multiplicity`); gamma_hat = V^{-1}(sigma_I^2).

    Raises
    ------
    EmptySample, DegenerateSample, GammaNotIdentifiable
    """
    values = _values(sample)
    n = int(values.size)
    if n < 2:
        raise DegenerateSample('at least two observations are required')
    if np.all(values == values[0]):
        raise DegenerateSample(
            'all observations coincide; intrinsic sample variance is zero'
        )
    summary = circular_summary(values)
    sigma2 = summary.intrinsic_variance
    if sigma2 <= 0.0:
        raise DegenerateSample('intrinsic sample variance is zero')
    gamma_hat = invert_intrinsic_variance(sigma2)
    at_boundary = sigma2 >= UNIFORM_INTRINSIC_VARIANCE - IDENTIFIABILITY_MARGIN
    if at_boundary:
        logger.warning(
            'Intrinsic variance %.10g is within %.0e of pi^2/3; '
            'gamma_hat=%.6g is poorly determined',
            sigma2, IDENTIFIABILITY_MARGIN, gamma_hat
        )
    mu_hat = summary.intrinsic_mean
    j1, j2 = fisher_info(gamma_hat)
    return MleFit(
        mu_hat=mu_hat,
        gamma_hat=gamma_hat,
        log_likelihood=log_likelihood(mu_hat, gamma_hat, values),
        fisher_j1=j1,
        fisher_j2=j2,
        se_mu=1.0 / math.sqrt(n * j1),
        se_gamma=1.0 / math.sqrt(n * j2),
        mean_set_multiplicity=len(summary.intrinsic_mean_set),
        n=n,
        intrinsic_variance=sigma2,
        mean_set=summary.intrinsic_mean_set,
        at_boundary=at_boundary,
    )


def fit_gn_moments(sample) -> MleFit:
    """
    Geodesic-moment estimates (intrinsic mean, V^{-1} of the intrinsic
    variance). They coincide with the maximum likelihood estimates.
    """
    return fit_gn_mle(sample)


def asymptotic_ci(fit: MleFit, n: int, level: float = 0.95) -> ConfidenceIntervals:
    """
    Wald intervals from the asymptotic normality of (mu_hat, gamma_hat)
    with covariance diag(1/J_1, 1/J_2)/n. The mu interval is wrapped back
    onto the circle; the gamma interval is clipped to stay positive.
    """
    if not 0.0 < level < 1.0:
        raise DomainError(f"level must lie in (0, 1), got {level!r}")
    if n < 1:
        raise DomainError('n must be >= 1')
    z = norm_cdf_inv(0.5 + 0.5 * level)
    se_mu = 1.0 / math.sqrt(n * fit.fisher_j1)
    se_gamma = 1.0 / math.sqrt(n * fit.fisher_j2)
    half = z * se_mu
    gamma_half = z * se_gamma
    return ConfidenceIntervals(
        level=level,
        z=z,
        mu_lower=canonicalize(fit.mu_hat.value - half),
        mu_upper=canonicalize(fit.mu_hat.value + half),
        mu_half_width=half,
        mu_covers_circle=half >= math.pi,
        gamma_lower=max(fit.gamma_hat - gamma_half, np.finfo(float).tiny),
        gamma_upper=fit.gamma_hat + gamma_half,
    )
