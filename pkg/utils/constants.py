#!/usr/bin/env python3
"""
Constants used throughout the Cayley fibration toolkit
"""

# Application version
APP_NAME = "CayleyToolkit"
APP_VERSION = "1.0.0"

# Database configuration
DEFAULT_DB_NAME = "reports.db"

# Quartic building block
QUARTIC_WEIGHTS = (1, 10, 100)
SYMMETRIC_WEIGHTS = (1, 1, 1)
PENCIL_VARS = (3, 4)
QUARTIC_SINGULAR_COUNT = 108  # 3^3 * 4
NEWTON_TOL = 1e-12
NEWTON_MAX_ITER = 50
RANK_TOL = 1e-8
FIBER_TOL = 1e-8
CLUSTER_TOL = 1e-8
LOCUS_TOL = 1e-8
ACCEPT_RESIDUAL = 1e-10
MIN_SEPARATION = 1e-6

# K3 lattice
K3_RANK = 22
K3_SIGNATURE = (3, 19)
E8_ROOT_COUNT = 240
LATTICE_TOL = 1e-9
MAX_DENOMINATOR = 10 ** 6

# E8 Cartan matrix (Bourbaki labelling, branch node 4 attached to 2)
E8_CARTAN = (
    (2, 0, -1, 0, 0, 0, 0, 0),
    (0, 2, 0, -1, 0, 0, 0, 0),
    (-1, 0, 2, -1, 0, 0, 0, 0),
    (0, -1, -1, 2, -1, 0, 0, 0),
    (0, 0, 0, -1, 2, -1, 0, 0),
    (0, 0, 0, 0, -1, 2, -1, 0),
    (0, 0, 0, 0, 0, -1, 2, -1),
    (0, 0, 0, 0, 0, 0, -1, 2),
)

# Critical rates of the quadric cone x^2 + y^2 + z^2 = 0 on (-2, 2)
QUADRIC_SPECTRUM = (
    ("-1", 2),
    ("0", 8),
    ("1", 22),
    ("-1 + sqrt(5)", 6),
)

# Index bookkeeping reference values
K3_FIBRE_TOPOLOGY = {"sigma": -16, "chi": 24, "self_int": 0, "dim_family": 0}
K3_FIBRE_INDEX = 4
AC_INDEX_BELOW_ZETA = 2
SIMPLE_INDEX = 4

# Flat Spin(7) model: Cayley 4-form, 1-based indices with signs
CAYLEY_TERMS = (
    ("1234", 1), ("1256", -1), ("1278", -1), ("1357", -1),
    ("1368", 1), ("1458", -1), ("1467", -1), ("2358", -1),
    ("2367", -1), ("2457", 1), ("2468", -1), ("3456", -1),
    ("3478", -1), ("5678", 1),
)
# s2 = S2_NORMALIZATION * (conj x, conj y, conj z, 0) / |(x, y, z)|^2 lifts d/d(eps)
S2_NORMALIZATION = 0.5
CALIBRATION_SAMPLES = 10_000
CALIBRATION_TOL = 1e-10
RATE_WINDOW = (0, 10)  # dyadic exponents: radii 2^0 .. 2^10
DET_RADII = (0.1, 10.0)

# Neck analysis
NECK_T_EXPONENTS = (4, 20)  # t = 2^-4 .. 2^-20
NECK_P = 2.0
NECK_DIMENSION = 4
QUAD_REL_TOL = 1e-8
FOLD_ALPHAS = (0.25, 0.5, 0.75)
FOLD_RATIO = 1e-3
CONTRACTION_MAX_ITER = 500
CONTRACTION_TOL = 1e-12
DIVERGENCE_FACTOR = 1e3
SMALLNESS_THRESHOLD = 1.0

# Twisted connected sum
SWAP_MATRIX = ((0, 1), (1, 0))
TCS_SINGULAR_COUNT = 2 * QUARTIC_SINGULAR_COUNT
REFERENCE_BETTI = {"b2": 0, "b3": 155}
TORSION_LAMBDA = -1.0

# Exit codes
EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INPUT_ERROR = 2

# Logging configuration
LOG_FORMAT = '%(asctime)s - %(levelname)s - %(message)s'
LOG_LEVEL = 'INFO'
