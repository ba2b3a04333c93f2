"""Rewrite sugared belief connectives into the core language.

The output uses only ``top``, (dual) relation atoms, ``=``/``!=``, ``~``,
``E``, ``\\/``, ``<g>`` and the subteam modalities ``<sub>``/``[sub]``.
Fresh parameters are named ``$1, $2, ...``; numbering starts above any
``$k`` already in the input, and outer rewrites are numbered before the
rewrites of their arguments, so output is reproducible.
"""

from __future__ import annotations

import itertools
import re

from translog import syntax as S
from translog.model import ParamVar
from translog.syntax import walk, node_terms
from translog.model import term_params

_FRESH = re.compile(r"^\$(\d+)$")


def desugar(phi):
    """Desugar a belief (or game) formula all the way down to core nodes."""
    counter = itertools.count(_max_fresh(phi) + 1)
    return _Desugarer(counter).run(phi)


def _max_fresh(phi) -> int:
    top = 0
    for n in walk(phi):
        names = set()
        for t in node_terms(n):
            names |= term_params(t)
        if isinstance(n, (S.Exists, S.Forall)):
            names.add(n.param)
        for name in names:
            m = _FRESH.match(name)
            if m:
                top = max(top, int(m.group(1)))
    return top


class _Desugarer:
    def __init__(self, counter):
        self.counter = counter

    def fresh(self) -> str:
        return f"${next(self.counter)}"

    def run(self, n):
        # one-step expansions first (allocates names outside-in), then recurse
        while True:
            expanded = self.expand(n)
            if expanded is None:
                break
            n = expanded
        return self.descend(n)

    def descend(self, n):
        r = self.run
        if isinstance(n, (S.Eps, S.ExistsVar, S.ForallVar)):
            return n
        if isinstance(n, S.Seq):
            return S.Seq(r(n.left), r(n.right))
        if isinstance(n, S.Choice):
            return S.Choice(r(n.left), r(n.right))
        if isinstance(n, S.Par):
            return S.Par(r(n.left), r(n.right))
        if isinstance(n, S.Test):
            return S.Test(r(n.formula))
        if isinstance(n, S.Hide):
            return S.Hide(r(n.game), n.hidden)
        if isinstance(n, S.Star):
            return S.Star(r(n.game))
        if isinstance(n, (S.Top, S.Rel, S.NRel, S.Eq, S.Neq)):
            return n
        if isinstance(n, S.Not):
            return S.Not(r(n.body))
        if isinstance(n, S.Exists):
            return S.Exists(n.param, r(n.body))
        if isinstance(n, S.Or):
            return S.Or(r(n.left), r(n.right))
        if isinstance(n, S.Diamond):
            return S.Diamond(r(n.game), r(n.body))
        if isinstance(n, S.SubDiamond):
            return S.SubDiamond(r(n.body))
        if isinstance(n, S.SubBox):
            return S.SubBox(r(n.body))
        raise TypeError(f"no desugaring for {n!r}")

    def expand(self, n):
        """One rewrite step for a sugared node, or None for core nodes."""
        if isinstance(n, S.Bot):
            p = ParamVar(self.fresh())
            return S.Forall(p.name, S.Neq(p, p))
        if isinstance(n, S.And):
            return S.Not(S.Or(S.Not(n.left), S.Not(n.right)))
        if isinstance(n, S.Implies):
            return S.Or(S.Not(n.left), n.right)
        if isinstance(n, S.Iff):
            return S.And(S.Implies(n.left, n.right), S.Implies(n.right, n.left))
        if isinstance(n, S.Forall):
            return S.Not(S.Exists(n.param, S.Not(n.body)))
        if isinstance(n, S.Box):
            return S.Not(S.Diamond(n.game, S.Not(n.body)))
        if isinstance(n, S.Tensor):
            return S.Diamond(S.Choice(S.Test(n.left), S.Test(n.right)), S.Top())
        if isinstance(n, S.TupleNeq):
            if not n.left:
                return S.Bot()
            parts = [S.Neq(a, b) for a, b in zip(n.left, n.right)]
            out = parts[0]
            for part in parts[1:]:
                out = S.Tensor(out, part)
            return out
        if isinstance(n, S.Announce):
            p = ParamVar(self.fresh())
            return S.Forall(p.name, S.Tensor(S.Neq(p, n.term), S.And(S.Eq(p, n.term), n.body)))
        if isinstance(n, S.Dep):
            if len(n.terms) == 1:
                p = ParamVar(self.fresh())
                return S.Exists(p.name, S.Eq(n.terms[0], p))
            out = S.Dep(n.terms[-1:])
            for t in reversed(n.terms[:-1]):
                out = S.Announce(t, out)
            return out
        if isinstance(n, S.Inc):
            ps = self.fresh_tuple(len(n.left))
            body = S.Implies(S.TupleNeq(ps, n.right), S.TupleNeq(ps, n.left))
            return _forall(ps, body)
        if isinstance(n, S.Exc):
            ps = self.fresh_tuple(len(n.left))
            body = S.Or(S.TupleNeq(ps, n.left), S.TupleNeq(ps, n.right))
            return _forall(ps, body)
        if isinstance(n, S.Indep):
            p2 = self.fresh_tuple(len(n.left))
            p3 = self.fresh_tuple(len(n.right))
            body = S.Implies(
                S.TupleNeq(n.left + n.right, p2 + p3),
                S.Or(S.TupleNeq(n.left, p2), S.TupleNeq(n.right, p3)),
            )
            out = _forall(p2 + p3, body)
            for t in reversed(n.given):
                out = S.Announce(t, out)
            return out
        if isinstance(n, S.IntImp):
            return S.SubBox(S.Implies(n.left, n.right))
        return None

    def fresh_tuple(self, k) -> tuple:
        return tuple(ParamVar(self.fresh()) for _ in range(k))


def _forall(params, body):
    for p in reversed(params):
        body = S.Forall(p.name, body)
    return body


def is_core(phi) -> bool:
    return all(isinstance(n, S.CORE_BELIEF + S.CORE_GAME) for n in walk(phi))
