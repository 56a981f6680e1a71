"""Asymptotic rates, equipartition sweeps, and finite-copy work gaps.

Many-copy quantities never materialize the d^n product vectors: the
n-fold product is grouped into type classes (all permutations of one
outcome count share their probability ratio), and the greedy hypothesis
test consumes whole classes with at most one fractional class. Class
totals are accumulated in log space, so n in the thousands is routine
for small d.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import EpsilonOutOfRange, TargetIsEquilibrium
from .oneshot import (
    W_COST_GRID_SIZE,
    _check_epsilon,
    _require_energy,
    relative_entropy,
    shannon_entropy,
)
from .theory import (
    CompressedState,
    QuasiclassicalState,
    TheoryContext,
    _check_operator_count,
    gibbs_state,
    log_partition_function,
    tensor_power_compressed,
)

EQUILIBRIUM_ATOL = 1e-12


@dataclass(frozen=True)
class AepSweep:
    """Per-copy hypothesis-testing entropies along a ladder of copy counts."""

    epsilon: float
    rows: tuple
    limit: float


class _SortedClasses:
    """Type classes sorted by evidence ratio, with prefix tables.

    Answers "optimal log Type II error at detection threshold `need`"
    in O(log n_classes) per query, which makes delta grids cheap.
    """

    def __init__(self, cs: CompressedState):
        ratio = cs.log_r - cs.log_g
        order = np.argsort(-ratio, kind="stable")
        self.r_mass = cs.r_mass[order]
        self.cum_r = np.cumsum(self.r_mass)
        self.log_g_mass = (cs.log_mult + cs.log_g)[order]
        self.prefix_log_g = np.logaddexp.accumulate(self.log_g_mass)
        # Zero-probability classes have ratio -inf and sort to the tail.
        self.n_pos = int(np.count_nonzero(self.r_mass > 0.0))

    def log_b(self, need: float) -> float:
        if self.n_pos == 0:
            return -math.inf
        total = self.cum_r[-1]
        if need >= total:
            # every class that carries probability must be accepted
            return float(np.logaddexp.reduce(self.log_g_mass[self.r_mass > 0.0]))
        k = int(np.searchsorted(self.cum_r, need, side="left"))
        prev_r = self.cum_r[k - 1] if k > 0 else 0.0
        prev_log_g = self.prefix_log_g[k - 1] if k > 0 else -math.inf
        frac = min(max((need - prev_r) / self.r_mass[k], 0.0), 1.0)
        if frac == 0.0:
            return float(prev_log_g)
        return float(np.logaddexp(prev_log_g, math.log(frac) + self.log_g_mass[k]))

    def log_b_many(self, needs: np.ndarray) -> np.ndarray:
        return np.array([self.log_b(float(v)) for v in needs])


def compressed_d_h_epsilon(cs: CompressedState, epsilon: float) -> float:
    """Hypothesis-testing entropy of a compressed power against its own
    equilibrium power, evaluated class by class in log space."""
    _check_epsilon(epsilon)
    return -_SortedClasses(cs).log_b(1.0 - epsilon) + 0.0


def free_energy_rate(state: QuasiclassicalState, ctx: TheoryContext) -> float:
    """Asymptotic per-copy work content of a state.

    <H>_r - T S(r) - sum_i p_i <X_i>_r + T ln Z with T = 1/beta, which
    equals (1/beta) times the relative entropy of r from its equilibrium
    ensemble.
    """
    _require_energy(ctx)
    _check_operator_count(state.spec, ctx)
    temperature = ctx.temperature
    table = state.spec.operator_matrix()
    means = table @ state.r
    rate = float(means[0]) - temperature * shannon_entropy(state.r)
    for (_, p_value), mean in zip(ctx.intensive, means[1:]):
        rate -= p_value * float(mean)
    return rate + temperature * log_partition_function(state.spec, ctx)


def aep_sweep(state: QuasiclassicalState, ctx: TheoryContext, epsilon: float,
              n_list, max_classes: int | None = None) -> AepSweep:
    """Per-copy D_H^epsilon over tensor powers for each n in ``n_list``.

    The per-copy values converge to the relative-entropy limit reported
    alongside the rows; epsilon must lie strictly inside (0, 1).
    """
    if not 0.0 < epsilon < 1.0:
        raise EpsilonOutOfRange(f"the sweep needs epsilon in (0, 1), got {epsilon!r}")
    g = gibbs_state(state.spec, ctx)
    limit = relative_entropy(state.r, g.r)
    rows = []
    for n in sorted(int(n) for n in n_list):
        cs = tensor_power_compressed(state, ctx, n, max_classes)
        rows.append((n, compressed_d_h_epsilon(cs, epsilon) / n))
    return AepSweep(epsilon=epsilon, rows=tuple(rows), limit=limit)


def conversion_rate(source: QuasiclassicalState, target: QuasiclassicalState,
                    ctx: TheoryContext) -> float:
    """Optimal copies of target per copy of source, in the many-copy limit.

    D(r || g_R) / D(s || g_S); undefined when the target is equilibrium.
    """
    d_source = relative_entropy(source.r, gibbs_state(source.spec, ctx).r)
    d_target = relative_entropy(target.r, gibbs_state(target.spec, ctx).r)
    if d_target <= EQUILIBRIUM_ATOL:
        raise TargetIsEquilibrium("target state is equilibrium; the rate diverges")
    return d_source / d_target


def finite_n_gap(state: QuasiclassicalState, ctx: TheoryContext, epsilon: float,
                 n: int, grid_size: int = W_COST_GRID_SIZE,
                 max_classes: int | None = None):
    """Total n-copy work yield and cost bounds: (gain_n, (lower_n, upper_n)).

    Totals are reported, not per-copy values, so the square-root-of-n gap
    between cost and gain stays visible to the caller.
    """
    _require_energy(ctx)
    _check_epsilon(epsilon, lo_open=True)
    classes = _SortedClasses(tensor_power_compressed(state, ctx, n, max_classes))
    beta = ctx.beta

    gain = -classes.log_b(1.0 - epsilon) / beta + 0.0
    upper = (-classes.log_b(epsilon) - math.log((1.0 - epsilon) / epsilon)) / beta
    top = 1.0 - epsilon
    deltas = np.geomspace(top * 1e-12, top, grid_size)
    deltas[-1] = top
    objectives = (-classes.log_b_many(epsilon + deltas) + np.log(deltas)) / beta
    lower = float(objectives.max())
    return gain, (lower, upper)
