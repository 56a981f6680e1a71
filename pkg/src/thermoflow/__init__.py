"""Resource-theoretic thermodynamics for quasiclassical states.

Equilibrium ensembles for arbitrary commuting conserved quantities,
rescaled Lorenz curves deciding single-shot convertibility, hypothesis-
testing work yields and cost bounds, and their many-copy limits.
"""

from .asymptotics import (
    AepSweep,
    aep_sweep,
    compressed_d_h_epsilon,
    conversion_rate,
    finite_n_gap,
    free_energy_rate,
)
from .convert import (
    ConversionQuery,
    WitnessMatrix,
    can_convert,
    feasibility_oracle,
    smallest_epsilon,
)
from .lorenz import DominationResult, LorenzCurve, build_curve, compare, dominates, evaluate
from .oneshot import (
    BatteryState,
    HypothesisTest,
    WorkReport,
    b_epsilon,
    battery_extract_check,
    battery_pair,
    d_h_epsilon,
    relative_entropy,
    resource_yield,
    shannon_entropy,
    vertex_oracle,
    w_cost_bounds,
    w_gain,
    work_report,
)
from .theory import (
    CompressedState,
    QuasiclassicalState,
    SystemSpec,
    TheoryContext,
    compose,
    compose_specs,
    gibbs_state,
    gibbs_weights,
    gravitational_chemical_potential,
    log_partition_function,
    make_context,
    partition_function,
    preset,
    tensor_power_compressed,
    validate_fixed_eigensubspace,
)

__version__ = "0.1.0"
