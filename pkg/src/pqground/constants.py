"""Numerical defaults shared across pqground.

Everything that a run configuration can override has its default here.
"""

# Flux inversion
FLUX_INVERSION_RTOL = 1e-14
FLUX_NEWTON_MAX_ITER = 200

# Born-Infeld chain
MAX_CHAIN_ORDER = 64

# Nonlinearity sampling
SMALL_S_RANGE = (1e-8, 1e-2)
LARGE_S_RANGE = (1e2, 1e8)
HYPOTHESIS_SAMPLES = 200
LIMIT_RATIO_THRESHOLD = 1e-3
S_MAX_FACTOR = 1e3
TRUNCATION_SCAN_POINTS = 4000
TRUNCATION_RTOL = 1e-12
PRIMITIVE_RTOL = 1e-10
DECOMPOSITION_SAMPLES = 10_000
DECOMPOSITION_ATOL = 1e-9

# Radial grid
DEFAULT_RESOLUTION = 4096
DEFAULT_R_MAX = 50.0
MIN_RESOLUTION = 64
GEOMETRIC_FRACTION = 0.25
GRADING_RATIO = 1.05
GAUSS_POINTS = 4

# Shooting
DEFAULT_RTOL = 1e-10
DEFAULT_ATOL = 1e-12
STARTUP_OFFSET = 1e-6
DECAY_U_FRACTION = 1e-8
DECAY_DU_FRACTION = 1e-6
TAIL_EXPONENT_FRACTION = 0.9
BISECTION_RTOL = 1e-12
MAX_BISECTIONS = 200
SCAN_LO = 0.1
SCAN_HI = 50.0
SCAN_COUNT = 60
FLUX_CHECKPOINTS = 16
ACTION_TIE_RTOL = 1e-6

# Certification
RESIDUAL_TOLERANCE = 1e-3
DECAY_STABILITY_TOLERANCE = 0.2

# Variational diagnostics
LAMBDA0_MARGIN = 0.1
SEED_MAX_DOUBLINGS = 10
SPHERE_RHOS = (1e-3, 3e-3, 1e-2, 3e-2)
SPHERE_DILATIONS = (0.5, 1.0, 2.0)

# Exit codes
EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NO_BRACKET = 2
EXIT_CERTIFICATION_FAILED = 3
