import math
from abc import ABC
from abc import abstractmethod

import numpy as np

from .constants import TWO_PI
from .geometry import Angle, AngleLike, canonicalize
from .special import Quadrature, DEFAULT_QUADRATURE, integrate


class BaseCircularDistribution(ABC):
    """
    Common interface of the circular families compared in this package.

    Subclasses supply the density and the closed forms of their moments;
    the base class provides quadrature versions of the same quantities,
    which serve as the reference the closed forms are checked against.
    """
    def __init__(self, mu: AngleLike):
        self.mu = canonicalize(mu)

    @property
    @abstractmethod
    def concentration(self) -> float:
        pass

    @abstractmethod
    def pdf(self, theta: AngleLike) -> float:
        """Density at `theta` with respect to arc length."""

    @abstractmethod
    def log_pdf(self, theta: AngleLike) -> float:
        pass

    @abstractmethod
    def extrinsic_variance(self) -> float:
        """Circular variance 1 - rho."""

    @abstractmethod
    def intrinsic_variance(self) -> float:
        """E[d_G(mu, theta)^2]."""

    def intrinsic_mean(self) -> Angle:
        return self.mu

    def extrinsic_mean(self) -> Angle:
        return self.mu

    def _centred(self, alpha: float) -> float:
        # density as a function of the tangent coordinate around mu
        return self.pdf(self.mu.value + alpha)

    def _peak_points(self) -> list[float]:
        return [0.0]

    def numerical_expectation(
            self,
            g,
            q: Quadrature = DEFAULT_QUADRATURE
    ) -> float:
        """
        E[g(alpha)] where alpha is the tangent coordinate around mu,
        integrated over (-pi, pi).
        """
        return integrate(
            lambda a: g(a) * self._centred(a),
            -math.pi, math.pi, q, points=self._peak_points()
        )

    def numerical_trig_moment(
            self,
            p: int,
            q: Quadrature = DEFAULT_QUADRATURE
    ) -> complex:
        """E[exp(i p theta)] by quadrature."""
        re = self.numerical_expectation(lambda a: math.cos(p * a), q)
        im = self.numerical_expectation(lambda a: math.sin(p * a), q)
        return complex(re, im) * np.exp(1j * p * self.mu.value)

    def numerical_total_mass(self, q: Quadrature = DEFAULT_QUADRATURE) -> float:
        points = sorted({self.mu.value, (self.mu.value + math.pi) % TWO_PI})
        return integrate(lambda t: self.pdf(t), 0.0, TWO_PI, q, points=points)
