"""Transitions, explicit games, and the operations on them.

A :class:`Transition` maps each assignment of its precondition to a
nonempty team. Pre- and postconditions are always derived from the map.
Explicit games are plain ``frozenset``\\ s of transitions.
"""

from __future__ import annotations

from typing import Iterable, Mapping

import numpy as np

from translog.errors import TransitionError
from translog.model import Assignment, Model, equiv_mod, extend, format_team


class Transition:
    __slots__ = ("_map", "_hash")

    def __init__(self, mapping: Mapping):
        m = {}
        for s, img in mapping.items():
            img = frozenset(img)
            if not img:
                raise TransitionError(f"empty image for {s}")
            m[s] = img
        self._map = m
        self._hash = None

    @classmethod
    def identity(cls, X: Iterable[Assignment]) -> "Transition":
        return cls({s: (s,) for s in X})

    @property
    def prec(self) -> frozenset:
        return frozenset(self._map)

    @property
    def post(self) -> frozenset:
        return frozenset().union(*self._map.values())

    def __call__(self, s: Assignment) -> frozenset:
        return self._map[s]

    def __getitem__(self, s: Assignment) -> frozenset:
        return self._map[s]

    def __contains__(self, s) -> bool:
        return s in self._map

    def __len__(self):
        return len(self._map)

    def items(self):
        return sorted(self._map.items())

    def __eq__(self, other):
        if not isinstance(other, Transition):
            return NotImplemented
        return self._map == other._map

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._map.items()))
        return self._hash

    def render(self) -> str:
        """One line per entry, ``x=0 y=0 => {x=0 y=0 | x=1 y=0}``."""
        return "\n".join(
            f"{s} => {{{' | '.join(str(t) for t in sorted(img))}}}" for s, img in self.items()
        )

    def __repr__(self):
        body = ", ".join(f"{s}: {format_team(img)}" for s, img in self.items())
        return f"Transition({{{body}}})"


def compose(t1: Transition, t2: Transition) -> Transition:
    """``t1 o t2``: play ``t1`` then ``t2``; images are unions over ``t1(s)``."""
    if t1.post != t2.prec:
        raise TransitionError("non-composable transitions")
    return Transition({s: frozenset().union(*(t2(u) for u in img)) for s, img in t1.items()})


def union(t0: Transition, t1: Transition) -> Transition:
    out = {}
    for s in t0.prec | t1.prec:
        if s in t0 and s in t1:
            out[s] = t0(s) | t1(s)
        elif s in t0:
            out[s] = t0(s)
        else:
            out[s] = t1(s)
    return Transition(out)


def parallel(t0: Transition, t1: Transition, vars0: Iterable[str], vars1: Iterable[str]) -> Transition:
    """Run both transitions from the same state; keep ``vars0`` from the first, ``vars1`` from the second."""
    vars0, vars1 = tuple(vars0), tuple(vars1)
    if t0.prec != t1.prec or set(vars0) & set(vars1):
        raise TransitionError("invalid parallel composition")
    out = {}
    for s in t0.prec:
        img = set()
        for s0 in t0(s):
            for s1 in t1(s):
                u = s
                for v in vars0:
                    u = extend(u, v, s0[v])
                for v in vars1:
                    u = extend(u, v, s1[v])
                img.add(u)
        out[s] = img
    return Transition(out)


def is_independent(t: Transition, hidden: Iterable[str]) -> bool:
    """``s ==_W s'`` implies ``t(s) == t(s')`` for all ``s, s'`` in the precondition."""
    hidden = frozenset(hidden)
    items = t.items()
    for i, (s, img) in enumerate(items):
        for s2, img2 in items[i + 1:]:
            if img != img2 and equiv_mod(s, s2, hidden):
                return False
    return True


def hide_game(G: Iterable[Transition], hidden: Iterable[str]) -> frozenset:
    hidden = frozenset(hidden)
    return frozenset(t for t in G if is_independent(t, hidden))


def concat_game(G: Iterable[Transition], G2: Iterable[Transition]) -> frozenset:
    G2 = list(G2)
    return frozenset(compose(t, u) for t in G for u in G2 if t.post == u.prec)


def choice_game(G0: Iterable[Transition], G1: Iterable[Transition]) -> frozenset:
    G1 = list(G1)
    return frozenset(union(t0, t1) for t0 in G0 for t1 in G1)


def pre_post_pairs(G: Iterable[Transition]) -> frozenset:
    return frozenset((t.prec, t.post) for t in G)


# ---------------------------------------------------------------------------
# packing to/from kernel rows


def to_row(model: Model, t: Transition) -> np.ndarray:
    row = np.zeros(model.n_assignments, dtype=np.int64)
    for s, img in t.items():
        row[model.index(s)] = model.team_to_mask(img)
    return row


def from_row(model: Model, row) -> Transition:
    ass = model.assignments()
    return Transition({ass[i]: model.mask_to_team(int(m)) for i, m in enumerate(row) if m})
