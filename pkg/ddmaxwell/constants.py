import math

DEFAULT_POINTS_PER_AXIS = 128
DEFAULT_DOMAIN_LENGTH = 2 * math.pi * 8
MIN_POINTS_PER_AXIS = 8

# de-aliasing: retained modes |m| <= N / DEALIAS_DIVISOR
DEALIAS_DIVISOR = 3

MAX_CFL_HALVINGS = 20

# phi-functions switch to their Taylor series below this |z|
PHI_SERIES_RADIUS = 0.5
PHI_SERIES_TERMS = 20

SNAPSHOT_MAGIC = b"DDMX"
SNAPSHOT_VERSION = 1
SNAPSHOT_PLANES = ("rho", "E1", "E2", "E3", "B1", "B2", "B3")

# fmt: off
TIMESERIES_COLUMNS = (
    "t", "l2_rho", "l2_E", "l2_B", "h1_rho", "h1_E", "h1_B", "grad_rho_l2", "hess_rho_l2",
    "linf_rho", "gauss_e_residual", "div_b_residual", "energy", "dissipation_integral",
    "I1", "I2", "I3", "I4", "J1", "J2", "J3", "J4", "J5", "J6", "linf_E",
)
# fmt: on

CALIBRATION_COLUMNS = ("constant_name", "value", "commit_note")
CALIBRATION_SAFETY = 1.25

FILTER_PROFILE_VERSION = "smoothstep-v1"

# absolute tolerances of the exact-identity checks
GAUSS_TOLERANCE = 1e-8
ENERGY_TOLERANCE = 1e-5
ISOMETRY_TOLERANCE = 1e-12
ZERO_MEAN_TOLERANCE = 1e-10

THREADS_ENV_VAR = "DDMX_THREADS"

# per-row diagnostics kept in memory but not written to the time-series CSV
AUXILIARY_COLUMNS = ("grad_F_l2_sq", "h1_rate", "z1", "z2", "z3", "z4")

# relative slack of the scalar inequalities (rounding only)
SCALAR_TOLERANCE = 1e-12
CONTRACTION_TOLERANCE = 1e-9
# H^1 balance residual tolerance, relative to the largest balance term
H1_BALANCE_TOLERANCE = 1e-6

DEFAULT_CORPUS_SIZE = 100
DEFAULT_SCALAR_SAMPLES = 100_000
