"""Single-shot convertibility: curve domination plus an LP witness oracle.

The production path decides the quasiorder geometrically, by comparing
rescaled Lorenz curves (O(d log d)). The feasibility oracle answers the
same question by searching directly for a stochastic matrix that fixes
the equilibrium vector and maps source to target; it is exponentially
more honest and polynomially more expensive, so it lives behind a size
cap and exists to cross-check the curves, not to replace them.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import ORACLE_DIM_DEFAULT, oracle_dim_cap
from .errors import ContextMismatch, TooLarge
from .lorenz import build_curve, dominates
from .simplex import solve_standard_lp
from .theory import QuasiclassicalState, TheoryContext, compose, gibbs_state

WITNESS_ATOL = 1e-9


@dataclass(frozen=True)
class ConversionQuery:
    """A source state, a target state, and the theory they live in."""

    source: QuasiclassicalState
    target: QuasiclassicalState
    ctx: TheoryContext


@dataclass(frozen=True, eq=False)
class WitnessMatrix:
    """Column-stochastic matrix certifying a conversion.

    Acts on probability column vectors, so each column sums to one; the
    defining properties M g = g and M r = s are checked by the oracle
    that returns the witness.
    """

    entries: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.entries, dtype=float)
        if m.ndim != 2:
            raise ValueError("witness must be a matrix")
        if m.min() < -WITNESS_ATOL or m.max() > 1.0 + WITNESS_ATOL:
            raise ValueError("witness entries leave [0, 1]")
        colsums = m.sum(axis=0)
        if np.abs(colsums - 1.0).max() > WITNESS_ATOL:
            raise ValueError("witness columns must sum to 1")
        m.flags.writeable = False
        object.__setattr__(self, "entries", m)

    @property
    def shape(self):
        return self.entries.shape


def _check_query(q: ConversionQuery):
    expected = q.ctx.n_state_operators
    for name, state in (("source", q.source), ("target", q.target)):
        if len(state.spec.operators) != expected:
            raise ContextMismatch(
                f"{name} has {len(state.spec.operators)} state operators, "
                f"context expects {expected}"
            )
    if q.source.spec.labels != q.target.spec.labels:
        raise ContextMismatch(
            f"operator labels differ: {q.source.spec.labels} vs {q.target.spec.labels}"
        )


def _same_table(a, b) -> bool:
    if a.dim != b.dim:
        return False
    return all(
        np.array_equal(ea, eb)
        for (_, ea), (_, eb) in zip(a.operators, b.operators)
    )


def can_convert(q: ConversionQuery) -> bool:
    """Whether some equilibrating operation maps source to target.

    States over the same operator table are compared directly. Otherwise
    each side is padded with the other side's equilibrium state, which
    puts both on one joint table without changing the answer.
    """
    _check_query(q)
    if _same_table(q.source.spec, q.target.spec):
        left, right = q.source, q.target
    else:
        left = compose(q.source, gibbs_state(q.target.spec, q.ctx))
        right = compose(gibbs_state(q.source.spec, q.ctx), q.target)
    return dominates(build_curve(left, q.ctx), build_curve(right, q.ctx))


def _transport_vectors(q: ConversionQuery):
    """(r, s, g) for the LP, composing when the tables differ."""
    if _same_table(q.source.spec, q.target.spec):
        g = gibbs_state(q.source.spec, q.ctx)
        return q.source.r, q.target.r, g.r
    g_src = gibbs_state(q.source.spec, q.ctx)
    g_tgt = gibbs_state(q.target.spec, q.ctx)
    r = compose(q.source, g_tgt).r
    s = compose(g_src, q.target).r
    g = compose(g_src, g_tgt).r
    return r, s, g


def _check_cap(q: ConversionQuery):
    cap = oracle_dim_cap(ORACLE_DIM_DEFAULT)
    if q.source.dim > cap or q.target.dim > cap:
        raise TooLarge(
            f"oracle capped at dimension {cap} per side, "
            f"got {q.source.dim} and {q.target.dim}"
        )


def _equistochastic_rows(g: np.ndarray):
    """Constraint rows for column sums and M g = g over vectorized M."""
    d = g.size
    eye = np.eye(d)
    colsum = np.tile(eye, d)                      # sum_i m[i, j] = 1
    fix_g = np.kron(eye, g.reshape(1, -1))        # sum_j g[j] m[i, j] = g[i]
    return colsum, fix_g


def feasibility_oracle(q: ConversionQuery):
    """Witness matrix for the conversion, or None when infeasible.

    Solves {M >= 0, columns sum to 1, M g = g, M r = s} with the dense
    phase-1 simplex and must agree with ``can_convert`` on every
    instance; the variables are the d*d entries of M, row-major.
    """
    _check_query(q)
    _check_cap(q)
    r, s, g = _transport_vectors(q)
    d = g.size
    colsum, fix_g = _equistochastic_rows(g)
    move_r = np.kron(np.eye(d), r.reshape(1, -1))
    A = np.vstack([colsum, fix_g, move_r])
    b = np.concatenate([np.ones(d), g, s])
    status, x, _ = solve_standard_lp(A, b, np.zeros(d * d))
    if status == "infeasible":
        return None
    matrix = np.clip(x[: d * d].reshape(d, d), 0.0, None)
    witness = WitnessMatrix(matrix)
    for got, want in ((matrix @ g, g), (matrix @ r, s)):
        if np.abs(got - want).max() > WITNESS_ATOL:
            raise ArithmeticError("feasible witness violates its defining equations")
    return witness


def smallest_epsilon(q: ConversionQuery) -> float:
    """Least trace distance to the target over all equistochastic images.

    Minimizes (1/2) || M r - s ||_1 subject to M >= 0, unit column sums
    and M g = g. Zero exactly when the conversion is possible.
    """
    _check_query(q)
    _check_cap(q)
    r, s, g = _transport_vectors(q)
    d = g.size
    colsum, fix_g = _equistochastic_rows(g)
    move_r = np.kron(np.eye(d), r.reshape(1, -1))
    # Variables: the d*d entries of M, then u, v with M r - s = u - v.
    n_m = d * d
    A = np.zeros((3 * d, n_m + 2 * d))
    A[:d, :n_m] = colsum
    A[d:2 * d, :n_m] = fix_g
    A[2 * d:, :n_m] = move_r
    A[2 * d:, n_m:n_m + d] = -np.eye(d)
    A[2 * d:, n_m + d:] = np.eye(d)
    b = np.concatenate([np.ones(d), g, s])
    c = np.concatenate([np.zeros(n_m), np.full(2 * d, 0.5)])
    status, _, objective = solve_standard_lp(A, b, c)
    if status != "optimal":
        raise ArithmeticError(f"distance LP ended {status}; it is feasible by construction")
    return float(min(max(objective, 0.0), 1.0))
