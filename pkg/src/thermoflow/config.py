"""Size caps for the exact oracles.

The environment variable THERMOFLOW_MAX_DIM, when set, overrides the
per-side dimension caps of both the linear-programming feasibility oracle
and the vertex-enumeration oracle.
"""

import os

# Per-side dimension cap for the simplex-based feasibility oracle.
ORACLE_DIM_DEFAULT = 12

# Dimension cap for vertex enumeration (2^d subsets are visited).
VERTEX_DIM_DEFAULT = 18

# Cap on the number of type classes a compressed tensor power may hold.
MAX_TYPE_CLASSES = 1_000_000

ENV_MAX_DIM = "THERMOFLOW_MAX_DIM"


def oracle_dim_cap(default: int) -> int:
    """Configured oracle cap: THERMOFLOW_MAX_DIM if set, else ``default``."""
    raw = os.environ.get(ENV_MAX_DIM)
    if raw is None:
        return default
    try:
        value = int(raw)
    except ValueError:
        return default
    return value if value > 0 else default
