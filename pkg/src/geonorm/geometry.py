"""
    geonorm.geometry

Angles on the unit circle: canonical representation in [0, 2*pi),
geodesic (arc-length) distance and the signed tangent coordinate
(Log map) of a point seen from a base point.

Scalar functions take and return `Angle`; the `*_array` variants work on
numpy arrays of radians and are what the estimators use internally.
"""

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .constants import TWO_PI
from .errors import InvalidAngle


def _wrap(raw: float) -> float:
    value = math.fmod(raw, TWO_PI)
    if value < 0.0:
        value += TWO_PI
    if value >= TWO_PI:  # -tiny + 2*pi rounds up to 2*pi
        value = 0.0
    return value


@dataclass(frozen=True, order=True)
class Angle:
    """A point of the unit circle, stored as its representative in [0, 2*pi)."""
    value: float

    def __post_init__(self):
        raw = float(self.value)
        if not math.isfinite(raw):
            raise InvalidAngle(f"angle must be finite, got {raw!r}")
        object.__setattr__(self, 'value', _wrap(raw))

    def __float__(self):
        return self.value

    def rotate(self, delta: float) -> 'Angle':
        return Angle(self.value + delta)


AngleLike = Angle | float


def canonicalize(raw: AngleLike) -> Angle:
    """
    Return the representative of `raw` in [0, 2*pi).

    Raises
    ------
    InvalidAngle
        If `raw` is nan or infinite.
    """
    return Angle(float(raw))


def geodesic_distance(a: AngleLike, b: AngleLike) -> float:
    """Arc length between `a` and `b`, in [0, pi]; symmetric in its arguments."""
    d = abs(float(canonicalize(a)) - float(canonicalize(b)))
    return min(d, TWO_PI - d)


def signed_displacement(mu: AngleLike, theta: AngleLike) -> float:
    """
    Tangent coordinate of `theta` in the chart centred at `mu`.

    The result lies in (-pi, pi]; its absolute value is the geodesic
    distance and ``canonicalize(mu + result) == theta``. The antipode of
    `mu` (cut locus) maps to +pi.
    """
    delta = float(canonicalize(theta)) - float(canonicalize(mu))
    if delta > math.pi:
        delta -= TWO_PI
    elif delta <= -math.pi:
        delta += TWO_PI
    return delta


def as_array(angles: Iterable[AngleLike] | np.ndarray) -> np.ndarray:
    """Canonical radians of a collection of angles as a float array."""
    values = np.asarray([float(a) for a in angles], dtype=float) \
        if not isinstance(angles, np.ndarray) else angles.astype(float)
    if not np.all(np.isfinite(values)):
        raise InvalidAngle('angles must be finite')
    return canonicalize_array(values)


def canonicalize_array(values: np.ndarray) -> np.ndarray:
    wrapped = np.mod(values, TWO_PI)
    return np.where(wrapped >= TWO_PI, 0.0, wrapped)


def _difference_array(mu: AngleLike, thetas: np.ndarray) -> np.ndarray:
    return canonicalize_array(np.asarray(thetas, dtype=float)) - float(canonicalize(mu))


def signed_displacement_array(mu: AngleLike, thetas: np.ndarray) -> np.ndarray:
    delta = _difference_array(mu, thetas)
    delta = np.where(delta > math.pi, delta - TWO_PI, delta)
    return np.where(delta <= -math.pi, delta + TWO_PI, delta)


def geodesic_distance_array(mu: AngleLike, thetas: np.ndarray) -> np.ndarray:
    d = np.abs(_difference_array(mu, thetas))
    return np.minimum(d, TWO_PI - d)
