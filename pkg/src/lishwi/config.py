"""Numerical defaults shared by the library, the CLI and the HTTP API."""

# Adaptive quadrature. Each subdivision splits a region into four, so the
# subdivision budget for a depth d is 4**d, capped to keep runtimes bounded.
QUAD_ABS_TOL = 1e-10
QUAD_REL_TOL = 1e-8
QUAD_MAX_DEPTH = 20
QUAD_MAX_SUBDIVISIONS = 10_000
QUAD_RULE = "gk21"

# Relative step for central finite differences of the effective noise in A
FD_REL_STEP = 1e-5

# Turning points: bisection in tau
ROOT_REL_TOL = 1e-4
ROOT_MAX_ITER = 200
DEFAULT_TAU_BRACKET = (0.05, 2.0)

# Physical defaults (the settings of the capacity figures)
DEFAULT_WAVELENGTH = 0.1
DEFAULT_Z0 = 4.0
DEFAULT_N0 = 1.0
DEFAULT_POWER_DB = 20.0

# Monte-Carlo oracle
DEFAULT_SEED = 20190531
DEFAULT_MC_TRIALS = 10_000
DEFAULT_MC_RESOLUTION = 256
MC_MIN_TRIALS = 100
MC_CHUNK_TRIALS = 250
MC_TOLERANCE = 0.01  # relative discretisation allowance against the quadrature value

# Output
SIGNIFICANT_DIGITS = 12
LOG_FORMAT = "%(asctime)s [%(levelname)s] %(name)s: %(message)s"

# HTTP server
HOST = "127.0.0.1"
PORT = 8000
