"""Pinned models and transitions used by the tests, the CLI and the docs."""

from __future__ import annotations

from translog.model import Model
from translog.transitions import Transition


def m2(**overrides) -> Model:
    """Domain {0, 1}, team variables x y, R = {1}, f swaps the elements, c = 0."""
    fields = dict(
        relations={"R": (1, [(1,)]), "S": (2, [(0, 1), (1, 1)])},
        functions={"f": (1, {0: 1, 1: 0})},
        constants={"c": 0},
    )
    fields.update(overrides)
    return Model(2, ("x", "y"), **fields)


def fixture_models() -> dict:
    """Every domain-2 model with team variables x y used as a fixed test bed."""
    return {
        "M2": m2(),
        "M2-full": m2(
            relations={"R": (1, [(0,), (1,)]), "S": (2, [(0, 0), (1, 1)])},
            functions={"f": (1, {0: 0, 1: 1})},
            constants={"c": 1},
        ),
        "M2-empty": m2(
            relations={"R": (1, []), "S": (2, [])},
            functions={"f": (1, {0: 0, 1: 0})},
            constants={"c": 0},
        ),
        "M2-low": m2(
            relations={"R": (1, [(0,)]), "S": (2, [(0, 0), (0, 1), (1, 0)])},
            functions={"f": (1, {0: 1, 1: 1})},
            constants={"c": 1},
        ),
    }


def parallel_counterexample():
    """Two transitions with equal pre/postconditions whose parallel compositions differ.

    Returns ``(model, s0, s1, tau, tau_swap)`` over team variables ``v w``.
    """
    M = Model(2, ("v", "w"))
    s0 = M.assignment(v=0, w=0)
    s1 = M.assignment(v=1, w=1)
    tau = Transition({s0: {s0}, s1: {s1}})
    tau_swap = Transition({s0: {s1}, s1: {s0}})
    return M, s0, s1, tau, tau_swap


def hiding_counterexample(literal: bool = False):
    """Two one-transition games with identical (pre, post) pairs but different ``/{x}``.

    Returns ``(model, s0, s1, G0, G1)``. ``G1`` holds the identity on
    ``{s0, s1}``; with ``literal=True`` it instead maps both assignments to
    ``{s0}``, which has postcondition ``{s0}`` and is independent on ``{x}``.
    """
    M = Model(2, ("x", "y"))
    s0 = M.assignment(x=0, y=0)
    s1 = M.assignment(x=1, y=0)
    tau = Transition({s0: {s0, s1}, s1: {s0, s1}})
    if literal:
        tau2 = Transition({s0: {s0}, s1: {s0}})
    else:
        tau2 = Transition({s0: {s0}, s1: {s1}})
    return M, s0, s1, frozenset([tau]), frozenset([tau2])
