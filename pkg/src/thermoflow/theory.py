"""Theory contexts, systems, quasiclassical states, and equilibrium ensembles.

Conventions used throughout: k_B = 1 and natural logarithms, so work comes
out in units of k_B T through the 1/beta prefactor. All spectra are
discrete and finite; continuous degrees of freedom must be discretized by
the caller. Everything here is immutable after construction and every
operation is a pure function, so concurrent use needs no locking.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .config import MAX_TYPE_CLASSES
from .errors import (
    DimensionMismatch,
    EntropyRepresentation,
    IntensivesInEntropyTheory,
    LabelMismatch,
    MissingParameter,
    NonPositiveBeta,
    NormalizationError,
    TooLarge,
)

ENERGY = "energy"
ENTROPY = "entropy"

# |sum(r) - 1| accepted as-is after construction.
NORMALIZATION_ATOL = 1e-12
# Inputs off by at most this much are renormalized; worse ones are rejected.
RENORMALIZE_ATOL = 1e-9
# Probabilities above this count as support for the eigensubspace predicate
# (below double-precision resolution of accumulated products).
SUPPORT_ATOL = 1e-15


def _as_float_vector(values, name: str) -> np.ndarray:
    arr = np.array(values, dtype=float)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} must be finite")
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class TheoryContext:
    """One resource theory: a representation plus the bath's intensive values.

    In the energy representation the context carries the inverse
    temperature beta and the values p_i conjugate to the state operators
    beyond energy. The entropy representation models closed isolated
    systems: it has no bath at all, so beta (the zeroth intensive value)
    and the intensive list must both be absent, and its equilibrium
    ensemble is uniform.

    Note that no consistency of the intensive values among themselves is
    enforced: how many may be chosen independently is the modeler's
    responsibility.
    """

    representation: str
    beta: float | None = None
    intensive: tuple[tuple[str, float], ...] = ()

    def __post_init__(self):
        if self.representation not in (ENERGY, ENTROPY):
            raise ValueError(f"unknown representation {self.representation!r}")
        pairs = tuple((str(label), float(value)) for label, value in self.intensive)
        object.__setattr__(self, "intensive", pairs)
        if self.representation == ENTROPY:
            if self.beta is not None or pairs:
                raise IntensivesInEntropyTheory(
                    "the entropy theory admits neither beta nor intensive values"
                )
            return
        if self.beta is None or not math.isfinite(self.beta) or self.beta <= 0:
            raise NonPositiveBeta(f"beta must be finite and positive, got {self.beta}")
        object.__setattr__(self, "beta", float(self.beta))
        for label, value in pairs:
            if not math.isfinite(value):
                raise ValueError(f"intensive value {label!r} must be finite")

    @property
    def temperature(self) -> float:
        """T = 1/beta (k_B = 1). Undefined in the entropy representation."""
        if self.beta is None:
            raise EntropyRepresentation("the entropy theory has no temperature")
        return 1.0 / self.beta

    @property
    def n_state_operators(self) -> int:
        """Operators a system of this theory must carry (j+1, or 0)."""
        if self.representation == ENTROPY:
            return 0
        return 1 + len(self.intensive)

    def entropy_intensives(self) -> np.ndarray:
        """Derived coefficients (F_0, ..., F_j) = (beta, -beta p_1, ...).

        Empty in the entropy representation, where every equilibrium
        exponent is zero.
        """
        if self.representation == ENTROPY:
            return np.zeros(0)
        values = np.array([v for _, v in self.intensive])
        return np.concatenate(([self.beta], -self.beta * values))


def make_context(representation: str, beta=None, intensive=()) -> TheoryContext:
    """Validated theory context.

    ``intensive`` is an ordered sequence of (label, value) pairs, one per
    state operator beyond energy.
    """
    return TheoryContext(representation, beta, tuple(intensive))


def preset(kind: str, **params) -> TheoryContext:
    """Named contexts whose free states are the familiar ensembles.

    kind            parameters
    --------------  ----------------------------------------------------
    entropy         none
    helmholtz       beta
    grand_potential beta, mu (number, sequence, or {label: value} mapping)
    gibbs           beta, pressure (enters as the intensive value -p)
    magnetic        beta, field (number or sequence of components)
    """
    def require(name):
        if name not in params or params[name] is None:
            raise MissingParameter(f"preset {kind!r} needs parameter {name!r}")
        return params[name]

    if kind == "entropy":
        return make_context(ENTROPY)
    if kind == "helmholtz":
        return make_context(ENERGY, require("beta"))
    if kind == "grand_potential":
        beta = require("beta")
        mu = require("mu")
        if isinstance(mu, dict):
            pairs = [(f"mu_{k}", float(v)) for k, v in mu.items()]
        elif np.ndim(mu) == 0:
            pairs = [("mu", float(mu))]
        else:
            pairs = [(f"mu_{i + 1}", float(v)) for i, v in enumerate(mu)]
        return make_context(ENERGY, beta, pairs)
    if kind == "gibbs":
        beta = require("beta")
        pressure = require("pressure")
        if np.ndim(pressure) == 0:
            pairs = [("-p", -float(pressure))]
        else:
            pairs = [(f"-p_{i + 1}", -float(v)) for i, v in enumerate(pressure)]
        return make_context(ENERGY, beta, pairs)
    if kind == "magnetic":
        beta = require("beta")
        fld = require("field")
        if np.ndim(fld) == 0:
            pairs = [("B", float(fld))]
        else:
            pairs = [(f"B_{i + 1}", float(v)) for i, v in enumerate(fld)]
        return make_context(ENERGY, beta, pairs)
    raise ValueError(f"unknown preset kind {kind!r}")


def gravitational_chemical_potential(mu: float, mass: float, gravity: float,
                                     height: float) -> float:
    """Chemical potential with the gravitational term folded in.

    A particle of the given mass sitting at the given height in a uniform
    field contributes mass * gravity * height of potential energy, which
    acts exactly like a shift of the phase's chemical potential.
    """
    return float(mu) + float(mass) * float(gravity) * float(height)


@dataclass(frozen=True, eq=False)
class SystemSpec:
    """Jointly diagonal operator table of one system.

    ``operators[i] = (label, eigenvalues)`` where index alpha refers to
    the same shared eigenstate across every operator; in the energy
    representation entry 0 is the energy operator. ``nonstate_blocks``
    holds the behind-the-scenes operators that never enter equilibrium
    weights but constrain supports.
    """

    dim: int
    operators: tuple = ()
    nonstate_blocks: tuple = ()

    def __post_init__(self):
        if int(self.dim) < 1:
            raise ValueError("dim must be at least 1")
        object.__setattr__(self, "dim", int(self.dim))
        for name in ("operators", "nonstate_blocks"):
            checked = []
            for label, eig in getattr(self, name):
                arr = _as_float_vector(eig, f"eigenvalues of {label!r}")
                if arr.size != self.dim:
                    raise DimensionMismatch(
                        f"operator {label!r} has {arr.size} eigenvalues, expected {self.dim}"
                    )
                checked.append((str(label), arr))
            object.__setattr__(self, name, tuple(checked))

    @property
    def labels(self) -> tuple:
        return tuple(label for label, _ in self.operators)

    @property
    def nonstate_labels(self) -> tuple:
        return tuple(label for label, _ in self.nonstate_blocks)

    def operator_matrix(self) -> np.ndarray:
        """Eigenvalue table stacked as an (n_operators, dim) array."""
        if not self.operators:
            return np.zeros((0, self.dim))
        return np.stack([eig for _, eig in self.operators])


@dataclass(frozen=True, eq=False)
class QuasiclassicalState:
    """A system together with the probability vector over its eigenstates."""

    spec: SystemSpec
    r: np.ndarray

    def __post_init__(self):
        arr = np.array(self.r, dtype=float)
        if arr.ndim != 1 or arr.size != self.spec.dim:
            raise DimensionMismatch(
                f"state vector has length {arr.size}, spec dimension is {self.spec.dim}"
            )
        if np.any(arr < -NORMALIZATION_ATOL):
            raise NormalizationError("probabilities must be nonnegative")
        arr = np.clip(arr, 0.0, None)
        total = arr.sum()
        if abs(total - 1.0) > RENORMALIZE_ATOL:
            raise NormalizationError(f"probabilities sum to {total!r}, too far from 1")
        if abs(total - 1.0) > NORMALIZATION_ATOL:
            arr = arr / total
        arr.flags.writeable = False
        object.__setattr__(self, "r", arr)

    @property
    def dim(self) -> int:
        return self.spec.dim


def _check_operator_count(spec: SystemSpec, ctx: TheoryContext):
    expected = ctx.n_state_operators
    if len(spec.operators) != expected:
        raise DimensionMismatch(
            f"context expects {expected} state operators, spec has {len(spec.operators)}"
        )


def equilibrium_exponents(spec: SystemSpec, ctx: TheoryContext) -> np.ndarray:
    """Per-eigenstate exponent -(F_0 x_0 + ... + F_j x_j); zeros in entropy theory."""
    _check_operator_count(spec, ctx)
    coeffs = ctx.entropy_intensives()
    if coeffs.size == 0:
        return np.zeros(spec.dim)
    return -(coeffs @ spec.operator_matrix())


def gibbs_weights(spec: SystemSpec, ctx: TheoryContext) -> np.ndarray:
    """Unnormalized equilibrium weights exp(-(F_0 x_0 + ...)).

    These carry the absolute scale whose total is the partition function,
    so no exponent shifting is applied; exponents beyond roughly +-700
    will overflow or underflow in this linear-domain form.
    """
    return np.exp(equilibrium_exponents(spec, ctx))


def log_partition_function(spec: SystemSpec, ctx: TheoryContext) -> float:
    """ln Z, computed with max-exponent shifting so extreme spectra stay finite."""
    e = equilibrium_exponents(spec, ctx)
    m = float(e.max())
    return m + math.log(np.exp(e - m).sum())


def partition_function(spec: SystemSpec, ctx: TheoryContext) -> float:
    """Z = sum of the equilibrium weights."""
    return math.exp(log_partition_function(spec, ctx))


def gibbs_state(spec: SystemSpec, ctx: TheoryContext) -> QuasiclassicalState:
    """The equilibrium (free) state of ``spec`` under ``ctx``.

    Entry alpha is exp(-(F_0 x_0 + ... + F_j x_j)) / Z; in the entropy
    representation this reduces to the uniform vector. The result is
    strictly positive whenever the eigenvalues are finite.
    """
    e = equilibrium_exponents(spec, ctx)
    w = np.exp(e - e.max())
    return QuasiclassicalState(spec, w / w.sum())


def _combine_blocks(blocks_a, blocks_b, dim_a, dim_b):
    # Union of labels; a side that lacks an operator contributes zeros.
    labels = [label for label, _ in blocks_a]
    labels += [label for label, _ in blocks_b if label not in labels]
    table_a = dict(blocks_a)
    table_b = dict(blocks_b)
    out = []
    for label in labels:
        left = table_a.get(label, np.zeros(dim_a))
        right = table_b.get(label, np.zeros(dim_b))
        out.append((label, np.add.outer(left, right).ravel()))
    return tuple(out)


def compose_specs(a: SystemSpec, b: SystemSpec) -> SystemSpec:
    """Operator table of the joint system; eigenvalues add pairwise.

    The joint index runs row-major with the left factor major:
    (alpha, beta) -> alpha * b.dim + beta.
    """
    if a.labels != b.labels:
        raise LabelMismatch(f"state operators differ: {a.labels} vs {b.labels}")
    ops = tuple(
        (label, np.add.outer(ea, eb).ravel())
        for (label, ea), (_, eb) in zip(a.operators, b.operators)
    )
    blocks = _combine_blocks(a.nonstate_blocks, b.nonstate_blocks, a.dim, b.dim)
    return SystemSpec(a.dim * b.dim, ops, blocks)


def compose(a: QuasiclassicalState, b: QuasiclassicalState) -> QuasiclassicalState:
    """Joint state r_a (x) r_b on the composed spec."""
    spec = compose_specs(a.spec, b.spec)
    return QuasiclassicalState(spec, np.outer(a.r, b.r).ravel())


@dataclass(frozen=True, eq=False)
class CompressedState:
    """Type-class compression of the n-fold product of a state.

    One row per composition vector k of n over the d outcomes, holding
    log multinomial(n; k), log prod r^k and log prod g^k (minus infinity
    where r has a zero in the class). ``r_mass`` and ``g_mass`` are the
    per-class totals multiplicity * value, which stay well inside double
    range even when the individual factors do not.
    """

    n: int
    log_mult: np.ndarray
    log_r: np.ndarray
    log_g: np.ndarray

    @property
    def n_classes(self) -> int:
        return self.log_mult.size

    @property
    def r_mass(self) -> np.ndarray:
        return np.exp(self.log_mult + self.log_r)

    @property
    def g_mass(self) -> np.ndarray:
        return np.exp(self.log_mult + self.log_g)


def _compositions(n: int, d: int) -> np.ndarray:
    """All length-d vectors of nonnegative integers summing to n."""
    if d == 1:
        return np.array([[n]], dtype=np.int64)
    dividers = np.array(
        list(itertools.combinations(range(n + d - 1), d - 1)), dtype=np.int64
    )
    first = dividers[:, :1]
    inner = np.diff(dividers, axis=1) - 1
    last = n + d - 2 - dividers[:, -1:]
    return np.hstack([first, inner, last])


def _masked_log_powers(base: np.ndarray, k: np.ndarray) -> np.ndarray:
    # log prod base^k with 0^0 = 1 and -inf where a zero base is used.
    safe = np.where(base > 0.0, base, 1.0)
    out = k @ np.log(safe)
    dead = base <= 0.0
    if dead.any():
        out[(k[:, dead] > 0).any(axis=1)] = -np.inf
    return out


def tensor_power_compressed(state: QuasiclassicalState, ctx: TheoryContext,
                            n: int, max_classes: int | None = None) -> CompressedState:
    """n-fold product of ``state`` grouped by type class.

    The class count is binomial(n + d - 1, d - 1); anything above
    ``max_classes`` (default one million classes) raises TooLarge rather
    than exhausting memory. Multinomial logs come from a cumulative
    log-factorial table, so total r and g masses are conserved to well
    within 1e-9.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    cap = MAX_TYPE_CLASSES if max_classes is None else max_classes
    d = state.dim
    count = math.comb(n + d - 1, d - 1)
    if count > cap:
        raise TooLarge(f"{count} type classes exceed the cap of {cap}")
    k = _compositions(n, d)
    logfact = np.concatenate(([0.0], np.cumsum(np.log(np.arange(1, n + 1)))))
    log_mult = logfact[n] - logfact[k].sum(axis=1)
    g = gibbs_state(state.spec, ctx).r
    return CompressedState(
        n=n,
        log_mult=log_mult,
        log_r=_masked_log_powers(state.r, k),
        log_g=_masked_log_powers(g, k),
    )


def validate_fixed_eigensubspace(state: QuasiclassicalState) -> bool:
    """Whether the support sits in one shared eigensubspace of every
    non-state operator. Vacuously true when there are none."""
    support = state.r > SUPPORT_ATOL
    for _, eig in state.spec.nonstate_blocks:
        values = eig[support]
        if values.size and not np.all(values == values[0]):
            return False
    return True
