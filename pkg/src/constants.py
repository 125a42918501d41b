"""
MagniPersist Constants

Enum-like identifiers shared across modules.
Only type identifiers and protocol constants are kept here.
All tunable values (bounds, caps, precision) live in config.yaml.

Use load_config() to access configuration values.
"""


class Commands:
    """CLI command identifiers."""

    MAGNITUDE = "magnitude"
    MAGFUN = "magfun"
    MH = "mh"
    EULER = "euler"
    PH = "ph"
    BLURRED = "blurred"
    LIMITS = "limits"
    APPROX = "approx"

    ALL = (MAGNITUDE, MAGFUN, MH, EULER, PH, BLURRED, LIMITS, APPROX)


class MetricFlags:
    """Structural flags computed for every FiniteMetricSpace."""

    SYMMETRIC = "symmetric"
    ZERO_DIAGONAL = "zero_diagonal"
    SEPARATED = "separated"
    FINITE_DISTANCES = "finite_distances"
    TRIANGLE_OK = "triangle_ok"

    ALL = (SYMMETRIC, ZERO_DIAGONAL, SEPARATED, FINITE_DISTANCES, TRIANGLE_OK)

    # Genuine finite metric spaces, possibly non-separated
    DEFAULT_REQUIRED = frozenset({ZERO_DIAGONAL, SYMMETRIC, TRIANGLE_OK, FINITE_DISTANCES})


class ChainModes:
    """Magnitude chain complex variants."""

    NORMALIZED = "normalized"
    UNNORMALIZED = "unnormalized"

    ALL = (NORMALIZED, UNNORMALIZED)


class Provenance:
    """Which builder produced a FilteredComplex."""

    NERVE = "nerve"
    RIPS = "rips"

    ALL = (NERVE, RIPS)


class MetricKinds:
    """Point-cloud metrics accepted by snap_point_cloud."""

    L1 = "l1"
    LINF = "linf"
    EUCLID_SNAPPED = "euclid"


class ExitCodes:
    """Process exit status per failure class."""

    OK = 0
    PARSE = 2
    VALIDATION = 3
    RESOURCE = 4
    INTERNAL_CHECK = 5
    COMPUTATION = 6


# Environment variable bounding the worker count
THREADS_ENV_VAR = "MAGNIPERSIST_THREADS"

# Text token for the infinity sentinel in every text format
INF_TOKEN = "inf"


__all__ = [
    "Commands",
    "MetricFlags",
    "ChainModes",
    "Provenance",
    "MetricKinds",
    "ExitCodes",
    "THREADS_ENV_VAR",
    "INF_TOKEN",
]
