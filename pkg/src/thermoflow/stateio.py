"""JSON descriptors for contexts and states.

One descriptor carries the context (representation, beta, intensive
values) alongside the system (operators, optional non-state blocks) and
the probability vector, so a single file round-trips through the loader:

    {
      "representation": "energy" | "entropy",
      "beta": number,                     # energy representation only
      "intensive": [{"label": s, "value": x}, ...],
      "operators": [{"label": s, "eigenvalues": [...]}, ...],
      "r": [...],
      "nonstate": [{"label": s, "eigenvalues": [...]}, ...]   # optional
    }

Floats are emitted with shortest exact repr, so a decimal round trip
reproduces the doubles bit for bit.
"""

from __future__ import annotations

import json

import numpy as np

from .theory import (
    ENERGY,
    QuasiclassicalState,
    SystemSpec,
    TheoryContext,
    make_context,
)


def context_to_dict(ctx: TheoryContext) -> dict:
    out = {"representation": ctx.representation}
    if ctx.representation == ENERGY:
        out["beta"] = ctx.beta
    out["intensive"] = [{"label": l, "value": v} for l, v in ctx.intensive]
    return out


def context_from_dict(data: dict) -> TheoryContext:
    if not isinstance(data, dict):
        raise ValueError("context descriptor must be a JSON object")
    if "representation" not in data:
        raise ValueError("context descriptor lacks 'representation'")
    intensive = [
        (entry["label"], float(entry["value"]))
        for entry in data.get("intensive", ())
    ]
    return make_context(data["representation"], data.get("beta"), intensive)


def _blocks_to_json(blocks) -> list:
    return [
        {"label": label, "eigenvalues": [float(v) for v in eig]}
        for label, eig in blocks
    ]


def _blocks_from_json(entries) -> tuple:
    return tuple(
        (entry["label"], np.array(entry["eigenvalues"], dtype=float))
        for entry in entries
    )


def state_to_dict(state: QuasiclassicalState, ctx: TheoryContext) -> dict:
    out = context_to_dict(ctx)
    out["operators"] = _blocks_to_json(state.spec.operators)
    out["r"] = [float(v) for v in state.r]
    if state.spec.nonstate_blocks:
        out["nonstate"] = _blocks_to_json(state.spec.nonstate_blocks)
    return out


def state_from_dict(data: dict):
    """(context, state) from one descriptor."""
    ctx = context_from_dict(data)
    if "r" not in data:
        raise ValueError("state descriptor lacks 'r'")
    r = np.array(data["r"], dtype=float)
    spec = SystemSpec(
        dim=r.size,
        operators=_blocks_from_json(data.get("operators", ())),
        nonstate_blocks=_blocks_from_json(data.get("nonstate", ())),
    )
    return ctx, QuasiclassicalState(spec, r)


def load_state(path):
    """(context, state) parsed from a descriptor file."""
    with open(path, "r", encoding="utf-8") as handle:
        return state_from_dict(json.load(handle))


def load_context(path) -> TheoryContext:
    with open(path, "r", encoding="utf-8") as handle:
        return context_from_dict(json.load(handle))


def dumps(payload: dict) -> str:
    """Deterministic JSON text: two-space indent, insertion key order."""
    return json.dumps(payload, indent=2) + "\n"
