"""
    geonorm.von_mises

The von Mises law vM(mu, kappa), kept as the reference family:

    f(theta; mu, kappa) = exp(kappa cos(theta - mu)) / (2 pi I_0(kappa)).

Bessel functions are evaluated in their exponentially scaled form, so the
density and the moments stay finite for large kappa.
"""

import math
import logging
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .base import BaseCircularDistribution
from .constants import TWO_PI, UNIFORM_INTRINSIC_VARIANCE, KAPPA_TOL
from .errors import DomainError, DegenerateSample, DirectionUndefined
from .estimation import empirical_trig_moment
from .geometry import Angle, AngleLike, canonicalize, signed_displacement
from .special import (
    DEFAULT_QUADRATURE,
    Quadrature,
    bessel_i_scaled,
    bessel_ratio,
    integrate,
)

logger = logging.getLogger('standard')


@dataclass(frozen=True)
class VmParams:
    mu: Angle
    kappa: float

    def __post_init__(self):
        object.__setattr__(self, 'mu', canonicalize(self.mu))
        _check_kappa(self.kappa)
        object.__setattr__(self, 'kappa', float(self.kappa))


def _check_kappa(kappa):
    if not (math.isfinite(kappa) and kappa >= 0.0):
        raise DomainError(f"kappa must be finite and >= 0, got {kappa!r}")


def vm_pdf(theta: AngleLike, params: VmParams) -> float:
    cosine = math.cos(signed_displacement(params.mu, theta))
    return math.exp(params.kappa * (cosine - 1.0)) / (
        TWO_PI * bessel_i_scaled(0, params.kappa)
    )


def vm_log_pdf(theta: AngleLike, params: VmParams) -> float:
    cosine = math.cos(signed_displacement(params.mu, theta))
    return params.kappa * (cosine - 1.0) - math.log(
        TWO_PI * bessel_i_scaled(0, params.kappa)
    )


def vm_mean_resultant_length(kappa: float) -> float:
    """A(kappa) = I_1(kappa)/I_0(kappa); 0 at kappa = 0, increasing to 1."""
    _check_kappa(kappa)
    return bessel_ratio(kappa)


def vm_trig_moment(p: int, params: VmParams) -> complex:
    """E[exp(i p theta)] = exp(i p mu) I_p(kappa)/I_0(kappa) for p in {1, 2}."""
    if p not in (1, 2):
        raise DomainError('von Mises moments are available for p = 1, 2')
    ratio = vm_mean_resultant_length(params.kappa)
    if p == 2:
        # I_2 = I_0 - (2/kappa) I_1
        ratio = 0.0 if params.kappa == 0.0 else 1.0 - 2.0 * ratio / params.kappa
    return ratio * complex(math.cos(p * params.mu.value), math.sin(p * params.mu.value))


def vm_extrinsic_variance(kappa: float) -> float:
    """1 - I_1(kappa)/I_0(kappa)."""
    return 1.0 - vm_mean_resultant_length(kappa)


def vm_intrinsic_variance(
        kappa: float,
        q: Quadrature = DEFAULT_QUADRATURE
) -> float:
    """
    (1 / (2 pi I_0(kappa))) int_{-pi}^{pi} a^2 exp(kappa cos a) da,
    by adaptive quadrature; pi^2/3 at kappa = 0.
    """
    _check_kappa(kappa)
    if kappa == 0.0:
        return UNIFORM_INTRINSIC_VARIANCE
    points = None
    width = 8.0 / math.sqrt(kappa)
    if width < math.pi:
        points = [width]
    half = integrate(
        lambda a: a * a * math.exp(kappa * (math.cos(a) - 1.0)),
        0.0, math.pi, q, points=points
    )
    return 2.0 * half / (TWO_PI * bessel_i_scaled(0, kappa))


def solve_kappa(rho: float) -> float:
    """Root of A(kappa) = rho for rho in (0, 1)."""
    if not 0.0 < rho < 1.0:
        raise DomainError('rho must lie in (0, 1)')
    upper = 2.0 * rho / (1.0 - rho * rho) + 10.0
    while bessel_ratio(upper) < rho:
        upper *= 2.0
        logger.debug('Expanding kappa bracket to %g', upper)
    return brentq(
        lambda k: bessel_ratio(k) - rho, 0.0, upper,
        xtol=KAPPA_TOL, rtol=4 * np.finfo(float).eps, maxiter=500
    )


def vm_fit_moments(sample) -> VmParams:
    """
    Moment (= maximum likelihood) fit of vM: mu from the direction of the
    first empirical trigonometric moment, kappa from A(kappa) = rho.

    Raises
    ------
    EmptySample
        If the sample is empty.
    DirectionUndefined
        If the resultant length vanishes.
    DegenerateSample
        If the resultant length is one (all points equal).
    """
    moment = empirical_trig_moment(sample, 1)
    if moment.direction is None:
        raise DirectionUndefined(
            'mean resultant length is zero; mean direction undefined'
        )
    rho = moment.resultant_length
    if rho >= 1.0 - KAPPA_TOL:
        raise DegenerateSample('mean resultant length is one; kappa unbounded')
    return VmParams(moment.direction, solve_kappa(rho))


class VonMises(BaseCircularDistribution):
    def __init__(self, mu: AngleLike, kappa: float):
        self.params = VmParams(mu, kappa)
        super().__init__(self.params.mu)

    def __repr__(self):
        return f"VonMises(mu={self.mu.value!r}, kappa={self.kappa!r})"

    @property
    def kappa(self) -> float:
        return self.params.kappa

    @property
    def concentration(self) -> float:
        return self.params.kappa

    def pdf(self, theta):
        return vm_pdf(theta, self.params)

    def log_pdf(self, theta):
        return vm_log_pdf(theta, self.params)

    def trig_moment(self, p: int) -> complex:
        return vm_trig_moment(p, self.params)

    def extrinsic_variance(self) -> float:
        return vm_extrinsic_variance(self.kappa)

    def intrinsic_variance(self) -> float:
        return vm_intrinsic_variance(self.kappa)

    def _peak_points(self):
        if self.kappa == 0.0:
            return [0.0]
        width = 8.0 / math.sqrt(self.kappa)
        return [p for p in (-width, 0.0, width) if abs(p) < math.pi]
