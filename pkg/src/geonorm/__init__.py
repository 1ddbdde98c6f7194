"""
    Package geonorm

    The geodesic Normal distribution gN(mu, gamma) on the unit circle:
    density, moments, sampling and maximum likelihood, with the von Mises
    law as the reference family.
"""

import logging
from logging import NullHandler
from logging.config import dictConfig

from geonorm.settings import CONFIG_LOG

from . import base
from . import constants
from . import errors
from . import geometry
from . import special
from . import streams
from . import geodesic_normal
from . import von_mises
from . import estimation
from . import utils

from .geometry import Angle, canonicalize, geodesic_distance, signed_displacement
from .geodesic_normal import GeodesicNormal, GnParams
from .von_mises import VonMises, VmParams
from .streams import RngStream
from .estimation import (
    circular_summary,
    fit_gn_mle,
    fit_gn_moments,
    fisher_info,
    asymptotic_ci,
    intrinsic_sample_mean,
)

dictConfig(CONFIG_LOG)

# Set default logging handler to avoid \"No handler found\" warnings.
logging.getLogger(__name__).addHandler(NullHandler())

__all__ = [
    'base',
    'constants',
    'errors',
    'geometry',
    'special',
    'streams',
    'geodesic_normal',
    'von_mises',
    'estimation',
    'utils',
    'Angle',
    'GeodesicNormal',
    'GnParams',
    'VonMises',
    'VmParams',
    'RngStream',
    'canonicalize',
    'geodesic_distance',
    'signed_displacement',
    'circular_summary',
    'fit_gn_mle',
    'fit_gn_moments',
    'fisher_info',
    'asymptotic_ci',
    'intrinsic_sample_mean',
]
