"""Compositional transition semantics for the Transition Logic fragment.

Instead of whole strategies this engine tracks only which target teams are
reachable from a source team, ``X -> Y``. Teams are bitmasks; every result
is a sorted, duplicate-free ``int64`` array.
"""

from __future__ import annotations

from typing import Iterable, Mapping

import numpy as np

from translog import kernels as K
from translog import syntax as S
from translog.errors import BudgetExceeded, FragmentError
from translog.model import Model


class TransitionGames:
    def __init__(self, ev):
        self.ev = ev
        self.model = ev.model
        self._memo = {}

    def succ(self, g, X: int, env) -> np.ndarray:
        from translog.reference import _env_key

        key = (g, X, _env_key(env, self.ev.free(g)))
        hit = self._memo.get(key)
        if hit is None:
            hit = self._memo[key] = self._succ(g, X, env)
        return hit

    def fiber_mask(self, v: str, s: int) -> int:
        return self.ev.reference.fiber_mask(v, s)

    def _succ(self, g, X, env) -> np.ndarray:
        ev = self.ev
        if isinstance(g, S.Eps):
            return np.array([X], dtype=np.int64)
        if isinstance(g, S.Test):
            return np.array([X] if ev.sat(g.formula, X, env) else [], dtype=np.int64)
        if isinstance(g, S.ExistsVar):
            groups = [[s] for s in K.mask_bits(X)]
            return self._pick(g.var, groups)
        if isinstance(g, S.Hide):
            if not isinstance(g.game, S.ExistsVar):
                raise FragmentError(f"outside Transition Logic: hiding applied to {S.to_text(g.game)}")
            return self._pick_hidden(g.game.var, g.hidden, X)
        if isinstance(g, S.ForallVar):
            Y = 0
            for s in K.mask_bits(X):
                Y |= self.fiber_mask(g.var, s)
            return np.array([Y], dtype=np.int64)
        if isinstance(g, S.Seq):
            out = set()
            for Z in self.succ(g.left, X, env):
                out.update(self.succ(g.right, int(Z), env).tolist())
                ev.check_budget(len(out), "sequential composition")
            return np.array(sorted(out), dtype=np.int64)
        if isinstance(g, S.Choice):
            out = set()
            for X0 in K.submasks(X):
                left = self.succ(g.left, X0, env)
                if not len(left):
                    continue
                rest = X & ~X0
                for extra in K.submasks(X0):
                    right = self.succ(g.right, rest | extra, env)
                    if len(right):
                        out.update(K.or_product(left, right).tolist())
                ev.check_budget(len(out), "choice")
            return np.array(sorted(out), dtype=np.int64)
        if isinstance(g, S.Star):
            return self._closure(g.game, X, env)
        if isinstance(g, S.Par):
            raise FragmentError("outside Transition Logic: parallel composition")
        raise TypeError(f"not a game formula: {g!r}")

    def _pick(self, v: str, groups) -> np.ndarray:
        """Targets of ``#v`` when each group of assignments must share one image."""
        acc = np.array([0], dtype=np.int64)
        for group in groups:
            opts = np.array(K.nonempty_submasks(self.fiber_mask(v, group[0])), dtype=np.int64)
            acc = K.or_product(acc, opts)
            self.ev.check_budget(len(acc), f"#{v}")
        return acc

    def _pick_hidden(self, v: str, hidden, X: int) -> np.ndarray:
        # A strategy for #v is independent on W only when W-equivalent
        # assignments receive identical images. Images of s and s' agree off
        # v with s and s' respectively, so equivalent assignments that differ
        # anywhere but v admit no strategy at all.
        M = self.model
        keep = [i for i, u in enumerate(M.team_vars) if u not in hidden]
        other = [i for i, u in enumerate(M.team_vars) if u != v]
        vv = M.var_values
        classes = {}
        for s in K.mask_bits(X):
            classes.setdefault(tuple(vv[keep, s].tolist()), []).append(s)
        for members in classes.values():
            ref = vv[other, members[0]]
            if any(not np.array_equal(vv[other, s], ref) for s in members[1:]):
                return np.zeros(0, dtype=np.int64)
        return self._pick(v, list(classes.values()))

    def _closure(self, body, X, env) -> np.ndarray:
        seen = {X}
        frontier = [X]
        depth = 0
        while frontier:
            depth += 1
            if depth > self.ev.handle.max_star_depth:
                raise BudgetExceeded(
                    f"resource budget exceeded: iteration deeper than {self.ev.handle.max_star_depth}"
                )
            nxt = []
            for Z in frontier:
                for Y in self.succ(body, Z, env).tolist():
                    if Y not in seen:
                        seen.add(Y)
                        nxt.append(Y)
            self.ev.check_budget(len(seen), "iteration")
            frontier = nxt
        return np.array(sorted(seen), dtype=np.int64)


# ---------------------------------------------------------------------------
# public API


def _evaluator(model, engine):
    from translog.reference import EngineHandle, Evaluator

    if isinstance(engine, Evaluator):
        return engine
    if engine is None or isinstance(engine, str):
        engine = EngineHandle.from_env("transition")
    return Evaluator(model, engine)


def successors(M: Model, g, X: Iterable, env: Mapping | None = None, engine=None) -> frozenset:
    """Every team ``Y`` with ``X -> Y`` admissible for ``g``."""
    from translog.reference import _check_env

    report = S.fragment_check(g)
    if not report.in_fragment:
        node, reason = report.violations[0]
        raise FragmentError(f"outside Transition Logic: {reason} at {S.to_text(node)}")
    env = dict(env or {})
    _check_env(g, env)
    ev = _evaluator(M, engine)
    return frozenset(M.mask_to_team(int(Y)) for Y in ev.transition.succ(g, M.team_to_mask(X), env))


def admissible(M: Model, X: Iterable, Y: Iterable, g, env: Mapping | None = None, engine=None) -> bool:
    return frozenset(Y) in successors(M, g, X, env, engine)
