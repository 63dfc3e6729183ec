"""
Configuration settings and shared numeric constants for the meanscale project.
"""
import math

# Root finding (generator inverses, theta(eta), scale parameters)
ROOT_RTOL = 1e-12
ROOT_XTOL = 1e-15
ROOT_MAXITER = 200
# Generator inverses are refined past the 1e-12 round-trip contract
INVERSE_RTOL = 1e-13
BRACKET_DOUBLINGS = 64

# Adaptive Simpson quadrature
QUAD_TOL = 1e-10
QUAD_MAX_INTERVALS = 10**6
QUAD_MAX_DEPTH = 60

# Frechet oracle
FRECHET_GRID = 1024
GOLDEN_TOL = 1e-8

# Parameter routing near the special values (alpha = 0, ln alpha = 0, p = 0)
CONTINUITY_EPS = 1e-8

# Monotonicity certificate for custom generators
MONOTONE_SAMPLES = 256
# Half-width used when a sampled interval is unbounded on one or both sides
SAMPLE_SPAN = 100.0

# Scale solver
ALPHA_MAX = 1e6
DEFAULT_SOLVE_TOL = 1e-12

# check_scale grid: symmetric log spacing over +/-[GRID_MIN, GRID_MAX] plus the special value
SCALE_GRID_MIN = 1e-3
SCALE_GRID_MAX = 1e3
SCALE_MIN_SAMPLES = 8

# Duality
DUAL_TOL = 1e-8
# Potentials given only as f carry ~1e-10 relative noise in their differenced f''
NUMERIC_QUAD_TOL = 1e-8
NUMERIC_DUAL_TOL = 1e-6

# Finite difference steps, scaled by max(1, |x|)
FIRST_DIFF_STEP = 2.220446049250313e-16 ** (1.0 / 3.0)
SECOND_DIFF_STEP = 2.220446049250313e-16 ** (1.0 / 6.0)

# Output
SIGNIFICANT_DIGITS = 17

# Family defaults, keyed by the CLI family name
FAMILY_SETTINGS = {
    "power": {
        "domain": (0.0, math.inf),
        "special": 0.0,
        "help": "h_p(u) = u^p, log u at p = 0 (increasing scale on the positive reals)",
    },
    "exponential": {
        "domain": (-math.inf, math.inf),
        "special": 0.0,
        "help": "e_a(u) = exp(a*u), identity at a = 0 (increasing scale on the real line)",
    },
    "radical": {
        "domain": (0.0, math.inf),
        "special": 0.0,
        "help": "k_a(u) = a^(1/u), 1/u at a = 1; parameter is t = ln a (decreasing scale)",
    },
    "custom": {
        "domain": (-math.inf, math.inf),
        "special": 0.0,
        "help": "s_a(u) = s(a*u) for the --expr generator s, identity at a = 0",
    },
}

POTENTIAL_SETTINGS = {
    "exp": {"help": "f = exp(theta), dual to the negative entropy"},
    "quadratic": {"help": "f = theta^2 / 2, self-dual"},
    "custom": {
        "domain": (-math.inf, math.inf),
        "base_point": 0.0,
        "help": "f given by --expr, derivatives by finite differences",
    },
}

# Exit codes of the command-line surface
EXIT_OK = 0
EXIT_INVALID = 2
EXIT_BRACKET_EXHAUSTED = 3
EXIT_SCALE_VIOLATION = 4
EXIT_DUAL_RESIDUAL = 5
