"""
Constants used throughout semiscale.

Verdict thresholds are shared by the estimators in scales and extrapolation so
that a report can be reproduced from the recorded grids alone.
"""

# Favard verdicts (log-log slope of the quotient t^-alpha * |T(t)f - f|)
FAVARD_FINITE_SLOPE = -0.05
FAVARD_DIVERGING_SLOPE = -0.1

# Window growth: log2(value on full window / value on centered half window)
GROWTH_STABLE = 0.05
GROWTH_DIVERGING = 0.1
HALF_WINDOW = 0.5

# Little-Hölder verdicts
LITTLE_MEMBER_SLOPE = 0.05
LITTLE_PLATEAU_SLOPE = 0.02
LITTLE_TOL_FACTOR = 1e-2
LITTLE_PLATEAU_FACTOR = 10.0
LITTLE_DECAY_FRACTION = 0.1

# Decades of the t- or lambda-grid used by the fits
FAVARD_FIT_DECADES = 2
LITTLE_FIT_DECADES = 3

# holder_exponent fit window
EXPONENT_T_MIN = 1e-4
EXPONENT_T_MAX = 1e-1

# Differences below this (relative to 1 + |f|) count as identically zero
ZERO_RELATIVE = 1e-13

# Classification chain
C1_TOLERANCE = 1e-3
CHAIN_LABELS = ("C1", "Lip", "h_b", "h_b_loc", "C_alpha", "BUC", "C_b")
DEFAULT_COMPACT_SETS = ((-5.0, 5.0), (-10.0, 10.0), (-20.0, 20.0))
EULER_COMPACT_SET = (-5.0, 5.0)

# Heat kernel quadrature
HEAT_NODES = 201
HEAT_WIDTH = 8.0
# y-step of the heat convolution at t = 1, scaled by t^(1/3)
HEAT_STEP = 0.025
HEAT_KERNEL_WIDTHS = 8.0
HEAT_KERNEL_RESOLUTION = 8.0
HEAT_IDENTITY_STEPS = 4.0

# Gamma/Erlang support bounds: mass outside the support
ERLANG_TAIL = 1e-14

# Exit codes of `semiscale run`
EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_CHAIN = 3
EXIT_NUMERICAL = 4
