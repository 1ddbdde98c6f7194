"""
    geonorm.special

Scalar special functions shared by both circular families: the error
function and the standard Gaussian cdf/quantile, the real part of erf at
a complex argument, modified Bessel functions of order 0 and 1, and an
adaptive quadrature used as the oracle for every closed form.

Everything here is a thin, validated layer over scipy.special and
scipy.integrate.quad (QUADPACK, adaptive Gauss-Kronrod).
"""

import math
import logging
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy import special as sc
from scipy.integrate import quad

from .constants import (
    QUAD_ABS_TOL,
    QUAD_REL_TOL,
    QUAD_MAX_DEPTH,
    QUAD_SUBINTERVALS_PER_DEPTH,
    RE_ERF_FALLBACK_TOL,
    RE_ERF_OVERFLOW_EXPONENT,
)
from .errors import AccuracyLoss, DomainError, NoConvergence

logger = logging.getLogger('standard')

_EPS = np.finfo(float).eps
_TWO_OVER_SQRT_PI = 2.0 / math.sqrt(math.pi)


@dataclass(frozen=True)
class Quadrature:
    """Tolerances for `integrate`.

    `max_depth` bounds the adaptive refinement; QUADPACK receives a budget
    of ``8 * max_depth`` subintervals.
    """
    abs_tol: float = QUAD_ABS_TOL
    rel_tol: float = QUAD_REL_TOL
    max_depth: int = QUAD_MAX_DEPTH

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise DomainError('quadrature tolerances must be positive')
        if self.max_depth < 1:
            raise DomainError('max_depth must be at least 1')

    @property
    def limit(self) -> int:
        return QUAD_SUBINTERVALS_PER_DEPTH * self.max_depth


DEFAULT_QUADRATURE = Quadrature()


def integrate(
        f: Callable[[float], float],
        a: float,
        b: float,
        q: Quadrature = DEFAULT_QUADRATURE,
        points: Sequence[float] | None = None,
) -> float:
    """
    Adaptive integral of `f` over [a, b].

    Parameters
    ----------
    f : callable
        Integrand, finite on [a, b].
    a, b : float
        Integration limits.
    q : Quadrature, optional
        Tolerances; the result satisfies
        ``|result - true| <= max(q.abs_tol, q.rel_tol * |true|)`` for smooth
        integrands.
    points : sequence of float, optional
        Break points inside (a, b), e.g. the location of a sharp peak.

    Returns
    -------
    float
        The integral.

    Raises
    ------
    NoConvergence
        When the subinterval budget is exhausted before the tolerance is
        met. The best estimate is attached to the exception. Other QUADPACK
        diagnostics, such as detected round-off, are logged as warnings and
        the estimate is returned.
    """
    if a == b:
        return 0.0
    if points is not None:
        lo, hi = min(a, b), max(a, b)
        points = [p for p in points if lo < p < hi] or None
    out = quad(
        f, a, b,
        epsabs=q.abs_tol,
        epsrel=q.rel_tol,
        limit=q.limit,
        points=points,
        full_output=1,
    )
    result, abserr = out[0], out[1]
    if len(out) > 3:  # QUADPACK reported ier != 0
        target = max(q.abs_tol, q.rel_tol * abs(result))
        if abserr > target and out[2]['last'] >= q.limit:
            error = NoConvergence(
                f"quadrature did not converge on [{a}, {b}]: {out[3]}",
                best_estimate=result,
            )
            error.error_estimate = abserr
            raise error
        logger.warning(
            'Quadrature on [%g, %g] accepted (error estimate %.3g): %s',
            a, b, abserr, out[3]
        )
    return result


def erf(x):
    """Error function (2/sqrt(pi)) * int_0^x exp(-t^2) dt."""
    return sc.erf(x)


def norm_cdf(x):
    """Standard Gaussian cdf, Phi(x) = (1 + erf(x/sqrt(2)))/2."""
    return sc.ndtr(x)


def norm_pdf(x):
    return np.exp(-0.5 * np.square(x)) / math.sqrt(2.0 * math.pi)


def norm_cdf_inv(p):
    """
    Standard Gaussian quantile with one Newton polishing step.

    The upper half is computed from the exact complement ``1 - p`` so
    that both tails are polished where the cdf is well conditioned.

    Raises
    ------
    DomainError
        If any `p` lies outside the open interval (0, 1).
    """
    p_arr = np.asarray(p, dtype=float)
    if np.any(~(p_arr > 0.0) | ~(p_arr < 1.0)):
        raise DomainError('norm_cdf_inv requires p in (0, 1)')
    upper = p_arr > 0.5
    tail = np.where(upper, 1.0 - p_arr, p_arr)  # exact for p >= 0.5
    x = sc.ndtri(tail)
    density = norm_pdf(x)
    safe = density > 0.0
    step = np.where(
        safe, (sc.ndtr(x) - tail) / np.where(safe, density, 1.0), 0.0
    )
    x = x - step
    x = np.where(upper, -x, x)
    return float(x) if np.ndim(x) == 0 else x


def _scaled_re_erf_faddeeva(x: float, y: float) -> tuple[float, float]:
    # exp(-y^2) erf(x+iy) = exp(-y^2) - exp(-x^2 - 2ixy) w(-y + ix); x > 0
    w = sc.wofz(complex(-y, x))
    tail = math.exp(-x * x) * complex(math.cos(2 * x * y), -math.sin(2 * x * y)) * w
    head = math.exp(-y * y)
    value = head - tail.real
    error = 4.0 * _EPS * (head + abs(tail))
    return value, error


def _scaled_re_erf_quadrature(x: float, y: float) -> tuple[float, float]:
    # exp(-y^2) Re erf(x+iy) = (2/sqrt(pi)) int_0^x exp(-s^2) cos(2ys) ds
    def integrand(s):
        return math.exp(-s * s) * math.cos(2.0 * y * s)
    q = Quadrature(abs_tol=1e-300, rel_tol=1e-13, max_depth=QUAD_MAX_DEPTH)
    points = None
    if y * x > 1.0:
        points = list(np.linspace(0.0, x, min(200, int(y * x) + 2))[1:-1])
    try:
        value = integrate(integrand, 0.0, x, q, points=points)
        error = abs(value) * 1e-13
    except NoConvergence as err:
        value, error = err.best_estimate, err.error_estimate
    return _TWO_OVER_SQRT_PI * value, _TWO_OVER_SQRT_PI * error


def scaled_re_erf_complex(x: float, y: float) -> float:
    """
    ``exp(-y**2) * Re(erf(x + i*y))``, finite for every real x, y.

    The Faddeeva function w(z) = exp(-z^2) erfc(-iz) gives the primary
    value together with a round-off estimate; when that estimate exceeds
    1e-11 relative, the value is recomputed by quadrature of
    (2/sqrt(pi)) int_0^x exp(-s^2) cos(2ys) ds and the more accurate of the
    two is kept.
    """
    if not (math.isfinite(x) and math.isfinite(y)):
        raise DomainError('re_erf_complex requires finite arguments')
    if x == 0.0:
        return 0.0
    sign = 1.0 if x > 0 else -1.0  # Re erf(-x + iy) = -Re erf(x + iy)
    x, y = abs(x), abs(y)  # Re erf is even in y
    if y == 0.0:
        return sign * float(sc.erf(x))
    value, error = _scaled_re_erf_faddeeva(x, y)
    if error > RE_ERF_FALLBACK_TOL * abs(value):
        fallback, fallback_error = _scaled_re_erf_quadrature(x, y)
        logger.debug(
            'Faddeeva estimate %.3g exceeds tolerance at (%g, %g); '
            'quadrature error %.3g', error, x, y, fallback_error
        )
        if fallback_error < error:
            value = fallback
    return sign * value


def re_erf_complex(x: float, y: float) -> float:
    """
    Real part of erf(x + i*y).

    Raises
    ------
    AccuracyLoss
        When exp(y**2) overflows double precision (|y| beyond ~26.4); use
        `scaled_re_erf_complex` in that regime.
    """
    if not (math.isfinite(x) and math.isfinite(y)):
        raise DomainError('re_erf_complex requires finite arguments')
    if y * y > RE_ERF_OVERFLOW_EXPONENT:
        raise AccuracyLoss(
            f"Re erf({x} + {y}i) overflows double precision; "
            "use scaled_re_erf_complex"
        )
    return scaled_re_erf_complex(x, y) * math.exp(y * y)


def bessel_i(order: int, kappa: float) -> float:
    """Modified Bessel function of the first kind I_order(kappa), order 0 or 1."""
    _check_bessel(order, kappa)
    return float(sc.i0(kappa) if order == 0 else sc.i1(kappa))


def bessel_i_scaled(order: int, kappa: float) -> float:
    """exp(-kappa) * I_order(kappa); finite for large kappa."""
    _check_bessel(order, kappa)
    return float(sc.i0e(kappa) if order == 0 else sc.i1e(kappa))


def bessel_ratio(kappa: float) -> float:
    """A(kappa) = I_1(kappa) / I_0(kappa)."""
    _check_bessel(0, kappa)
    return float(sc.i1e(kappa) / sc.i0e(kappa))


def _check_bessel(order, kappa):
    if order not in (0, 1):
        raise DomainError('only orders 0 and 1 are supported')
    if not kappa >= 0.0 or not math.isfinite(kappa):
        raise DomainError(f"kappa must be finite and >= 0, got {kappa}")
