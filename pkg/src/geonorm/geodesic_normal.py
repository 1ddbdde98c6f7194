"""
    geonorm.geodesic_normal

The geodesic Normal law gN(mu, gamma) on the circle,

    f(theta; mu, gamma) = exp(-gamma/2 * d_G(mu, theta)^2) / k(gamma),
    k(gamma) = sqrt(2*pi/gamma) * erf(pi * sqrt(gamma/2)).

The signed displacement of theta from mu is a centred Gaussian of
precision gamma truncated to [-pi, pi]; every moment below is a moment of
that truncated variable. The density at the antipode of mu is taken by
continuity (d_G = pi).
"""

import math
import numbers
from dataclasses import dataclass

import numpy as np
from scipy import special as sc

from .base import BaseCircularDistribution
from .constants import (
    TWO_PI,
    PI_SQUARED,
    RE_ERF_MAX_ORDER,
    SERIES_THRESHOLD,
    SERIES_TERMS,
)
from .errors import AccuracyLoss, DomainError
from .geometry import (
    Angle,
    AngleLike,
    canonicalize,
    canonicalize_array,
    geodesic_distance,
    geodesic_distance_array,
    signed_displacement,
)
from .special import norm_cdf_inv, scaled_re_erf_complex
from .streams import RngStream


@dataclass(frozen=True)
class GnParams:
    mu: Angle
    gamma: float

    def __post_init__(self):
        object.__setattr__(self, 'mu', canonicalize(self.mu))
        _check_gamma(self.gamma)
        object.__setattr__(self, 'gamma', float(self.gamma))


@dataclass(frozen=True)
class TrigMoment:
    """p-th trigonometric moment E[exp(i p theta)] = re + i im."""
    p: int
    re: float
    im: float
    resultant_length: float
    direction: Angle

    @property
    def value(self) -> complex:
        return complex(self.re, self.im)


def _check_gamma(gamma):
    if isinstance(gamma, bool) or not isinstance(gamma, numbers.Real) \
            or not math.isfinite(gamma) or not gamma > 0:
        raise DomainError(f"gamma must be finite and > 0, got {gamma!r}")


def _erf_arg(gamma: float) -> float:
    return math.pi * math.sqrt(gamma / 2.0)


def norm_const(gamma: float) -> float:
    """k(gamma) = sqrt(2*pi/gamma) * erf(pi*sqrt(gamma/2)), in (0, 2*pi]."""
    _check_gamma(gamma)
    return math.sqrt(TWO_PI / gamma) * float(sc.erf(_erf_arg(gamma)))


def log_norm_const(gamma: float) -> float:
    _check_gamma(gamma)
    return 0.5 * math.log(TWO_PI / gamma) + math.log(float(sc.erf(_erf_arg(gamma))))


def _truncated_moments(gamma: float) -> tuple[float, float, float]:
    """
    M_k = int_0^1 u^k exp(-c u^2) du for k = 0, 2, 4 with c = gamma*pi^2/2.

    Below SERIES_THRESHOLD the power series in c is used; the closed
    recursion loses every digit to cancellation as c -> 0.
    """
    c = gamma * PI_SQUARED / 2.0
    if c < SERIES_THRESHOLD:
        m0 = m2 = m4 = 0.0
        term = 1.0  # (-c)^m / m!
        for m in range(SERIES_TERMS):
            m0 += term / (2 * m + 1)
            m2 += term / (2 * m + 3)
            m4 += term / (2 * m + 5)
            term *= -c / (m + 1)
        return m0, m2, m4
    root = math.sqrt(c)
    tail = math.exp(-c)
    m0 = math.sqrt(math.pi) * float(sc.erf(root)) / (2.0 * root)
    m2 = (m0 - tail) / (2.0 * c)
    m4 = (3.0 * m2 - tail) / (2.0 * c)
    return m0, m2, m4


def intrinsic_variance(gamma: float) -> float:
    """
    V(gamma) = (1/gamma) * (1 - 2*pi*exp(-gamma*pi^2/2) / k(gamma)).

    Strictly decreasing from pi^2/3 (gamma -> 0) to 0 (gamma -> inf).
    """
    _check_gamma(gamma)
    m0, m2, _ = _truncated_moments(gamma)
    return PI_SQUARED * m2 / m0


def fourth_moment(gamma: float) -> float:
    """E[d_G(mu, theta)^4]."""
    _check_gamma(gamma)
    m0, _, m4 = _truncated_moments(gamma)
    return PI_SQUARED * PI_SQUARED * m4 / m0


def intrinsic_variance_derivative(gamma: float) -> float:
    """V'(gamma) = -Var[d_G^2] / 2."""
    variance = intrinsic_variance(gamma)
    return -0.5 * (fourth_moment(gamma) - variance * variance)


def norm_const_derivatives(gamma: float) -> tuple[float, float, float]:
    """(k, k', k'') with k' = -k V / 2 and k'' = k E[d^4] / 4."""
    k = norm_const(gamma)
    return k, -0.5 * k * intrinsic_variance(gamma), 0.25 * k * fourth_moment(gamma)


def pdf(theta, params: GnParams):
    """Density at `theta` (an angle or an array of radians)."""
    if isinstance(theta, np.ndarray):
        dist = geodesic_distance_array(params.mu, theta)
        return np.exp(-0.5 * params.gamma * dist * dist) / norm_const(params.gamma)
    dist = geodesic_distance(params.mu, theta)
    return math.exp(-0.5 * params.gamma * dist * dist) / norm_const(params.gamma)


def log_pdf(theta, params: GnParams):
    if isinstance(theta, np.ndarray):
        dist = geodesic_distance_array(params.mu, theta)
    else:
        dist = geodesic_distance(params.mu, theta)
    return -log_norm_const(params.gamma) - 0.5 * params.gamma * dist * dist


def displacement_cdf(t, params: GnParams):
    """
    Cdf of the signed displacement of theta from mu on [-pi, pi],

        F(t) = 1/2 + erf(t*sqrt(gamma/2)) / (2*erf(pi*sqrt(gamma/2))).

    Raises
    ------
    DomainError
        If any `t` lies outside [-pi, pi].
    """
    t_arr = np.asarray(t, dtype=float)
    if np.any(~(np.abs(t_arr) <= math.pi)):
        raise DomainError('displacement_cdf requires t in [-pi, pi]')
    scale = math.sqrt(params.gamma / 2.0)
    value = 0.5 + 0.5 * sc.erf(t_arr * scale) / sc.erf(math.pi * scale)
    value = np.clip(value, 0.0, 1.0)
    return float(value) if np.ndim(value) == 0 else value


def standardized_mgf(t: float, gamma: float) -> float:
    """
    Moment generating function of sqrt(gamma) times the signed displacement;
    tends to exp(t^2/2) as gamma grows.
    """
    _check_gamma(gamma)
    a = math.pi * math.sqrt(gamma)
    inner = sc.ndtr(a - t) - sc.ndtr(-a - t)
    return math.exp(0.5 * t * t) * float(inner) / float(sc.erf(a / math.sqrt(2.0)))


def trig_moment(p: int, params: GnParams) -> TrigMoment:
    """
    p-th trigonometric moment

        phi_p = exp(i p mu) * exp(-p^2/(2 gamma))
                * Re erf(pi sqrt(gamma/2) - i p/sqrt(2 gamma)) / erf(pi sqrt(gamma/2)).

    Raises
    ------
    DomainError
        If p is not a positive integer.
    AccuracyLoss
        If p exceeds the validated order RE_ERF_MAX_ORDER.
    """
    if isinstance(p, bool) or int(p) != p or p < 1:
        raise DomainError(f"p must be a positive integer, got {p!r}")
    p = int(p)
    if p > RE_ERF_MAX_ORDER:
        raise AccuracyLoss(
            f"trigonometric moments are validated for p <= {RE_ERF_MAX_ORDER}"
        )
    x = _erf_arg(params.gamma)
    y = -p / math.sqrt(2.0 * params.gamma)
    # exp(-y^2) Re erf(x + iy) with exp(-y^2) = exp(-p^2/(2 gamma))
    magnitude = scaled_re_erf_complex(x, y) / float(sc.erf(x))
    phase = p * params.mu.value
    re = magnitude * math.cos(phase)
    im = magnitude * math.sin(phase)
    return TrigMoment(
        p=p,
        re=re,
        im=im,
        resultant_length=math.hypot(re, im),
        direction=canonicalize(math.atan2(im, re)),
    )


def extrinsic_variance(params: GnParams) -> float:
    """Circular variance 1 - |phi_1|."""
    rho = trig_moment(1, params).resultant_length
    return min(1.0, max(0.0, 1.0 - rho))


def off_center_sq_distance(delta: float, gamma: float) -> float:
    """
    E[d_G(mu, theta)^2] for theta ~ gN(mu_star, gamma) and
    delta = mu_star - mu in (-pi, pi).

    For delta >= 0 this is

        g(delta) = delta^2 + V(gamma)
                   + 4 pi int_{pi-delta}^{pi} (pi - delta - a) f(a) da,

    where f is the density of the displacement from mu_star. The function
    is even in delta and g''(delta) = 2 - 4 pi f(pi - delta).
    """
    _check_gamma(gamma)
    if not (math.isfinite(delta) and abs(delta) < math.pi):
        raise DomainError('off_center_sq_distance requires |delta| < pi')
    delta = abs(delta)
    base = delta * delta + intrinsic_variance(gamma)
    if delta == 0.0:
        return base
    scale = math.sqrt(gamma / 2.0)
    total = float(sc.erf(math.pi * scale))
    # P(a in [pi - delta, pi]) and int a f(a) da over the same band
    band = 0.5 * float(
        sc.erfc((math.pi - delta) * scale) - sc.erfc(math.pi * scale)
    ) / total
    first = (
        math.exp(-0.5 * gamma * (math.pi - delta) ** 2)
        - math.exp(-0.5 * gamma * PI_SQUARED)
    ) / (gamma * norm_const(gamma))
    return base + 4.0 * math.pi * ((math.pi - delta) * band - first)


def sample_displacements(n: int, gamma: float, rng: RngStream) -> np.ndarray:
    """
    `n` draws of Z | |Z| <= pi with Z ~ N(0, 1/gamma), by inversion:
    u uniform on (Phi(-pi sqrt(gamma)), Phi(pi sqrt(gamma))),
    Z = Phi^{-1}(u) / sqrt(gamma).
    """
    _check_gamma(gamma)
    if n < 0:
        raise DomainError('n must be >= 0')
    if n == 0:
        return np.empty(0)
    mass = float(sc.erf(_erf_arg(gamma)))  # Phi(a) - Phi(-a)
    v = rng.uniform(n)
    u = 0.5 + (v - 0.5) * mass
    u = np.clip(u, np.nextafter(0.0, 1.0), np.nextafter(1.0, 0.0))
    z = norm_cdf_inv(u) / math.sqrt(gamma)
    return np.clip(np.atleast_1d(z), -math.pi, math.pi)


def sample_array(n: int, params: GnParams, rng: RngStream) -> np.ndarray:
    """`n` draws as canonical radians."""
    z = sample_displacements(n, params.gamma, rng)
    return canonicalize_array(params.mu.value + z)


def sample(n: int, params: GnParams, rng: RngStream) -> list[Angle]:
    """`n` independent gN draws; deterministic given `rng`."""
    return [Angle(value) for value in sample_array(n, params, rng)]


class GeodesicNormal(BaseCircularDistribution):
    """Object view of gN(mu, gamma) over the module functions."""
    def __init__(self, mu: AngleLike, gamma: float):
        self.params = GnParams(mu, gamma)
        super().__init__(self.params.mu)

    def __repr__(self):
        return f"GeodesicNormal(mu={self.mu.value!r}, gamma={self.gamma!r})"

    @property
    def gamma(self) -> float:
        return self.params.gamma

    @property
    def concentration(self) -> float:
        return self.params.gamma

    def pdf(self, theta):
        return pdf(theta, self.params)

    def log_pdf(self, theta):
        return log_pdf(theta, self.params)

    def displacement_cdf(self, t):
        return displacement_cdf(t, self.params)

    def trig_moment(self, p: int) -> TrigMoment:
        return trig_moment(p, self.params)

    def extrinsic_variance(self) -> float:
        return extrinsic_variance(self.params)

    def intrinsic_variance(self) -> float:
        return intrinsic_variance(self.gamma)

    def off_center_sq_distance(self, mu: AngleLike) -> float:
        return off_center_sq_distance(signed_displacement(mu, self.mu), self.gamma)

    def _peak_points(self):
        width = 8.0 / math.sqrt(self.gamma)
        return [p for p in (-width, 0.0, width) if abs(p) < math.pi]

    def sample(self, n: int, rng: RngStream) -> list[Angle]:
        return sample(n, self.params, rng)

    def sample_array(self, n: int, rng: RngStream) -> np.ndarray:
        return sample_array(n, self.params, rng)
