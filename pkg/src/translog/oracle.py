"""Brute-force strategy oracle, written independently of the packed engine.

Transitions here are frozensets of ``(values, image)`` pairs over plain value
tuples. Atomic games are decided by listing *every* transition with the given
precondition and keeping those that pass a direct membership test; compound
games are built straight from their defining clauses. Nothing here uses the
kernels, the bitmask encoding, or :mod:`translog.transitions`.

Only small inputs are practical: there are ``(2**|Ass| - 1)**|X|``
candidate transitions per team.
"""

from __future__ import annotations

import itertools

from translog import syntax as S
from translog.model import App, Const, Model, ParamVar, TeamVar


class Oracle:
    def __init__(self, model: Model):
        self.M = model
        self.vars = model.team_vars
        self.ass = [tuple(a.values) for a in model.assignments()]
        self._all = {}
        self._memo = {}

    # -- helpers --------------------------------------------------------

    def pos(self, v):
        return self.vars.index(v)

    def update(self, s, v, m):
        i = self.pos(v)
        return s[:i] + (m,) + s[i + 1:]

    def candidates(self, X):
        """Every transition with precondition X."""
        key = frozenset(X)
        if key not in self._all:
            images = [
                frozenset(c)
                for k in range(1, len(self.ass) + 1)
                for c in itertools.combinations(self.ass, k)
            ]
            order = sorted(key)
            self._all[key] = [
                frozenset(zip(order, choice)) for choice in itertools.product(images, repeat=len(order))
            ]
        return self._all[key]

    @staticmethod
    def prec(t):
        return frozenset(s for s, _ in t)

    @staticmethod
    def post(t):
        out = set()
        for _, img in t:
            out |= img
        return frozenset(out)

    def by_post(self, transitions) -> dict:
        groups = {}
        for t in transitions:
            groups.setdefault(self.post(t), []).append(t)
        return groups

    @staticmethod
    def compose_with(firsts, t2) -> list:
        """``t1 o t2`` for each ``t1`` (all with postcondition ``prec(t2)``)."""
        d2 = dict(t2)
        images = {}
        out = []
        for t1 in firsts:
            entries = []
            for s, img in t1:
                r = images.get(img)
                if r is None:
                    r = images[img] = frozenset().union(*(d2[u] for u in img))
                entries.append((s, r))
            out.append(frozenset(entries))
        return out

    # -- atomic membership ----------------------------------------------

    def is_identity(self, t):
        return all(img == {s} for s, img in t)

    def is_pick(self, t, v):
        i = self.pos(v)
        return all(
            all(u[:i] == s[:i] and u[i + 1:] == s[i + 1:] for u in img) for s, img in t
        )

    def is_all(self, t, v):
        return all(img == {self.update(s, v, m) for m in self.M.domain} for s, img in t)

    def independent(self, t, hidden):
        keep = [i for i, v in enumerate(self.vars) if v not in hidden]
        d = dict(t)
        for s, s2 in itertools.combinations(d, 2):
            if all(s[i] == s2[i] for i in keep) and d[s] != d[s2]:
                return False
        return True

    # -- belief atoms inside tests ----------------------------------------

    def term(self, t, s, env):
        if isinstance(t, TeamVar):
            return s[self.pos(t.name)]
        if isinstance(t, ParamVar):
            return env[t.name]
        if isinstance(t, Const):
            return self.M.constants[t.name]
        if isinstance(t, App):
            _, table = self.M.functions[t.fn]
            return int(table[tuple(self.term(a, s, env) for a in t.args)])
        raise TypeError(t)

    def holds(self, phi, X, env):
        """Direct team semantics for the first-order fragment used in test games."""
        if isinstance(phi, S.Top):
            return True
        if isinstance(phi, S.Rel):
            rows = self.M.relations[phi.name][1]
            return all(tuple(self.term(a, s, env) for a in phi.args) in rows for s in X)
        if isinstance(phi, S.NRel):
            rows = self.M.relations[phi.name][1]
            return all(tuple(self.term(a, s, env) for a in phi.args) not in rows for s in X)
        if isinstance(phi, S.Eq):
            return all(self.term(phi.left, s, env) == self.term(phi.right, s, env) for s in X)
        if isinstance(phi, S.Neq):
            return all(self.term(phi.left, s, env) != self.term(phi.right, s, env) for s in X)
        if isinstance(phi, S.Not):
            return not self.holds(phi.body, X, env)
        if isinstance(phi, S.Or):
            return self.holds(phi.left, X, env) or self.holds(phi.right, X, env)
        if isinstance(phi, S.Exists):
            return any(self.holds(phi.body, X, {**env, phi.param: m}) for m in self.M.domain)
        if isinstance(phi, S.Dep):
            seen = {}
            for s in X:
                key = tuple(self.term(a, s, env) for a in phi.terms[:-1])
                val = self.term(phi.terms[-1], s, env)
                if seen.setdefault(key, val) != val:
                    return False
            return True
        raise NotImplementedError(f"oracle does not evaluate {type(phi).__name__}")

    # -- strategies -------------------------------------------------------

    def strategies(self, g, X, env=None) -> frozenset:
        env = env or {}
        X = frozenset(X)
        key = (g, X, tuple(sorted(env.items())))
        if key not in self._memo:
            self._memo[key] = frozenset(self._strategies(g, X, env))
        return self._memo[key]

    def _strategies(self, g, X, env):
        if isinstance(g, S.Eps):
            return [t for t in self.candidates(X) if self.is_identity(t)]
        if isinstance(g, S.ExistsVar):
            return [t for t in self.candidates(X) if self.is_pick(t, g.var)]
        if isinstance(g, S.ForallVar):
            return [t for t in self.candidates(X) if self.is_all(t, g.var)]
        if isinstance(g, S.Test):
            if not self.holds(g.formula, X, env):
                return []
            return [t for t in self.candidates(X) if self.is_identity(t)]
        if isinstance(g, S.Hide):
            return [t for t in self.strategies(g.game, X, env) if self.independent(t, g.hidden)]
        if isinstance(g, S.Seq):
            out = set()
            for Z, firsts in self.by_post(self.strategies(g.left, X, env)).items():
                for t2 in self.strategies(g.right, Z, env):
                    out.update(self.compose_with(firsts, t2))
            return out
        if isinstance(g, S.Choice):
            out = set()
            members = sorted(X)
            for labels in itertools.product((0, 1, 2), repeat=len(members)):
                X0 = frozenset(s for s, k in zip(members, labels) if k != 1)
                X1 = frozenset(s for s, k in zip(members, labels) if k != 0)
                for t0 in self.strategies(g.left, X0, env):
                    for t1 in self.strategies(g.right, X1, env):
                        d = dict(t0)
                        for s, img in t1:
                            d[s] = d.get(s, frozenset()) | img
                        out.add(frozenset(d.items()))
            return out
        if isinstance(g, S.Star):
            found = {frozenset((s, frozenset([s])) for s in X)}
            frontier = set(found)
            while frontier:
                nxt = set()
                for Z, group in self.by_post(frontier).items():
                    for t2 in self.strategies(g.game, Z, env):
                        nxt.update(self.compose_with(group, t2))
                frontier = nxt - found
                found |= frontier
            return found
        if isinstance(g, S.Par):
            v0 = [self.pos(v) for v in S.affected_vars(g.left)]
            v1 = [self.pos(v) for v in S.affected_vars(g.right)]
            out = set()
            for t0 in self.strategies(g.left, X, env):
                d0 = dict(t0)
                for t1 in self.strategies(g.right, X, env):
                    d1 = dict(t1)
                    entries = []
                    for s in X:
                        img = set()
                        for a in d0[s]:
                            for b in d1[s]:
                                u = list(s)
                                for i in v0:
                                    u[i] = a[i]
                                for i in v1:
                                    u[i] = b[i]
                                img.add(tuple(u))
                        entries.append((s, frozenset(img)))
                    out.add(frozenset(entries))
            return out
        raise TypeError(f"not a game formula: {g!r}")


def encode(model: Model, strategies) -> frozenset:
    """Oracle transitions as tuples of image bitmasks, one entry per assignment."""
    index = {tuple(a.values): i for i, a in enumerate(model.assignments())}
    out = set()
    for t in strategies:
        row = [0] * len(index)
        for s, img in t:
            row[index[s]] = sum(1 << index[u] for u in img)
        out.add(tuple(row))
    return frozenset(out)


def compare(model: Model, games, teams, evaluator=None) -> list:
    """``(game, team mask)`` pairs where the reference engine and the oracle differ."""
    from translog.reference import Evaluator

    ev = evaluator or Evaluator(model)
    orc = Oracle(model)
    ass = orc.ass
    bad = []
    for g in games:
        for X in teams:
            mine = frozenset(map(tuple, ev.reference.strats(g, X, {}).tolist()))
            theirs = encode(model, orc.strategies(g, [ass[i] for i in range(len(ass)) if X >> i & 1]))
            if mine != theirs:
                bad.append((g, X))
    return bad


def as_oracle_form(transition) -> frozenset:
    """Convert a :class:`translog.transitions.Transition` to the oracle's representation."""
    return frozenset(
        (tuple(s.values), frozenset(tuple(u.values) for u in img)) for s, img in transition.items()
    )
