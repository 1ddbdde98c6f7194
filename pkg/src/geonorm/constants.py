"""
    geonorm.constants

Numerical constants shared by the modules of the package. Tolerances
are absolute unless the name says otherwise.
"""

import math

TWO_PI = 2.0 * math.pi
PI_SQUARED = math.pi ** 2
UNIFORM_INTRINSIC_VARIANCE = PI_SQUARED / 3.0  # sigma_I^2 of the uniform law

"""Quadrature defaults"""

QUAD_ABS_TOL = 1e-12
QUAD_REL_TOL = 1e-10
QUAD_MAX_DEPTH = 60
QUAD_SUBINTERVALS_PER_DEPTH = 8

"""Complex error function"""

RE_ERF_MAX_ORDER = 8  # largest trigonometric moment order in the validated strip
RE_ERF_FALLBACK_TOL = 1e-11  # estimated relative error triggering quadrature
RE_ERF_OVERFLOW_EXPONENT = 700.0  # exp(y**2) overflows float64 beyond this

"""Small-concentration series (uniform limit)"""

SERIES_THRESHOLD = 1.0  # use power series when gamma*pi**2/2 is below this
SERIES_TERMS = 30

"""Estimation"""

FRECHET_TIE_TOL = 1e-9  # candidates within this F-value of the minimum
FRECHET_VALIDITY_SLACK = 1e-12
ZERO_RESULTANT_TOL = 1e-12
GAMMA_BRACKET = (1e-8, 1e8)
GAMMA_MAX_ITER = 200
GAMMA_SECANT_STEPS = 3
GAMMA_RESIDUAL_TOL = 1e-12
IDENTIFIABILITY_MARGIN = 1e-6
KAPPA_TOL = 1e-12

"""Study defaults (desk scale)"""

DEFAULT_REPLICATIONS = 1000
DEFAULT_SAMPLE_SIZES = (10, 20, 50, 100, 500)
TABLE_ROWS = (  # (mu_star, gamma_star)
    (math.pi / 4, 0.5),
    (3 * math.pi / 4, 1.0),
    (5 * math.pi / 4, 5.0),
    (7 * math.pi / 4, 10.0),
)
RNG_ALGORITHM = 'PCG64'
ESTIMATOR_NAMES = ('mle', 'moments')
DEFAULT_ESTIMATOR = 'mle'

"""Output formats"""

FLOAT_FORMAT = '%.17g'
SAMPLE_COLUMNS = ('index', 'theta')
CURVES_COLUMNS = (
    'concentration', 'gn_var_I', 'gn_var_E', 'vm_var_I', 'vm_var_E'
)
FISHER_COLUMNS = ('concentration', 'inv_j1', 'inv_j2')
MSE_COLUMNS = (
    'mu_star', 'gamma_star', 'n', 'm', 'mse_mu', 'mse_gamma', 'failures'
)
CORRELATION_COLUMN = 'corr_mu_gamma'  # kept in the sidecar, not the CSV
DETAIL_COLUMNS = (
    'mu_star', 'gamma_star', 'n', 'replication', 'mu_hat', 'gamma_hat',
    'sq_err_mu', 'sq_err_gamma'
)
CLT_COLUMNS = ('replication', 'standardized_error')
CLT_VARIANCE_LABEL = 'variance'  # trailing row holding 1/J_1(gamma*)
