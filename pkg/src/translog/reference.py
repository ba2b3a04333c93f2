"""Reference game semantics: strategy enumeration and team satisfaction.

Strategies are enumerated clause by clause, in packed form (see
:mod:`translog.kernels`), and memoised per (subformula, team, parameter
values). Belief satisfaction is shared by both engines; only ``<g>`` and
``[g]`` consult the selected engine.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, replace
from typing import Iterable, Mapping

import numpy as np

from translog import kernels as K
from translog import syntax as S
from translog.errors import BudgetExceeded, EvaluationError
from translog.model import Model, term_values
from translog.transitions import Transition, from_row, to_row

DEFAULT_MAX_INTERMEDIATE = 2_000_000
DEFAULT_MAX_STAR_DEPTH = 10_000
PAIR_CHUNK = 1 << 20  # pairs materialised at once by pairwise kernels


@dataclass(frozen=True)
class EngineHandle:
    """Which engine answers ``<g>`` queries, plus resource budgets.

    ``max_intermediate`` bounds the number of transitions (or teams) any
    intermediate result may hold; ``max_star_depth`` bounds iteration rounds.
    """

    selector: str = "reference"
    max_intermediate: int = DEFAULT_MAX_INTERMEDIATE
    max_star_depth: int = DEFAULT_MAX_STAR_DEPTH

    def __post_init__(self):
        if self.selector not in ("reference", "transition"):
            raise ValueError(f"unknown engine {self.selector!r}")
        if self.max_intermediate <= 0 or self.max_star_depth <= 0:
            raise ValueError("budgets must be positive")

    @classmethod
    def from_env(cls, selector: str = "reference") -> "EngineHandle":
        """Read ``TRANSLOG_BUDGET`` (``N`` or ``max_intermediate=N,max_star_depth=D``)."""
        handle = cls(selector)
        raw = os.environ.get("TRANSLOG_BUDGET", "").strip()
        if not raw:
            return handle
        if raw.isdigit():
            return replace(handle, max_intermediate=int(raw))
        fields = {}
        for part in raw.split(","):
            key, _, val = part.partition("=")
            key = key.strip()
            if key not in ("max_intermediate", "max_star_depth"):
                raise ValueError(f"TRANSLOG_BUDGET: unknown key {key!r}")
            fields[key] = int(val)
        return replace(handle, **fields)


def _env_key(env: Mapping, params: Iterable[str]) -> tuple:
    return tuple((p, env[p]) for p in sorted(params))


class Evaluator:
    """Evaluation state for one model: memo tables and both game engines."""

    def __init__(self, model: Model, handle: EngineHandle | None = None):
        if model.n_assignments > K.MAX_ASSIGNMENTS:
            raise BudgetExceeded(
                f"resource budget exceeded: model has {model.n_assignments} assignments "
                f"(packed engines support at most {K.MAX_ASSIGNMENTS})"
            )
        self.model = model
        self.handle = handle or EngineHandle.from_env()
        self.N = model.n_assignments
        self.full = (1 << self.N) - 1
        self._free = {}
        self._atom = {}
        self._sat = {}
        self._posts = {}
        self.reference = ReferenceGames(self)
        self._transition = None

    @property
    def transition(self):
        if self._transition is None:
            from translog.transition_engine import TransitionGames

            self._transition = TransitionGames(self)
        return self._transition

    def free(self, node) -> frozenset:
        fp = self._free.get(node)
        if fp is None:
            fp = self._free[node] = S.free_params(node)
        return fp

    def check_budget(self, count: int, what: str):
        if count > self.handle.max_intermediate:
            raise BudgetExceeded(
                f"resource budget exceeded: {what} needs {count} items "
                f"(max_intermediate={self.handle.max_intermediate})"
            )

    # -- belief formulas -----------------------------------------------

    def sat(self, phi, X: int, env: Mapping) -> bool:
        key = (phi, X, _env_key(env, self.free(phi)))
        hit = self._sat.get(key)
        if hit is None:
            hit = self._sat[key] = bool(self._eval(phi, X, env))
        return hit

    def values(self, t, env) -> np.ndarray:
        return term_values(t, env, self.model)

    def tuple_values(self, ts, env) -> np.ndarray:
        if not ts:
            return np.zeros((self.N, 0), dtype=np.int64)
        return np.stack([self.values(t, env) for t in ts], axis=1)

    def atom_mask(self, phi, env) -> int:
        """Assignments at which a first-order atom holds pointwise."""
        key = (phi, _env_key(env, self.free(phi)))
        hit = self._atom.get(key)
        if hit is not None:
            return hit
        M = self.model
        if isinstance(phi, (S.Rel, S.NRel)):
            if phi.name not in M.relations:
                raise EvaluationError(f"unknown relation {phi.name!r}")
            arity, rows = M.relations[phi.name]
            if arity != len(phi.args):
                raise EvaluationError(f"relation {phi.name} expects {arity} arguments")
            vals = self.tuple_values(phi.args, env)
            good = np.array([tuple(r) in rows for r in vals.tolist()], dtype=bool)
        elif isinstance(phi, (S.Eq, S.Neq)):
            good = self.values(phi.left, env) == self.values(phi.right, env)
        elif isinstance(phi, S.TupleNeq):
            good = (self.tuple_values(phi.left, env) != self.tuple_values(phi.right, env)).any(axis=1)
        else:
            raise TypeError(phi)
        mask = 0
        for i in np.flatnonzero(good):
            mask |= 1 << int(i)
        self._atom[key] = mask
        return mask

    def subteam_masks(self, X: int) -> list:
        return list(K.submasks(X))

    def game_posts(self, g, X: int, env) -> np.ndarray:
        key = (self.handle.selector, g, X, _env_key(env, self.free(g)))
        hit = self._posts.get(key)
        if hit is None:
            if self.handle.selector == "reference":
                hit = np.unique(K.posts(self.reference.strats(g, X, env)))
            else:
                hit = self.transition.succ(g, X, env)
            self._posts[key] = hit
        return hit

    def _eval(self, phi, X, env) -> bool:
        if isinstance(phi, S.Top):
            return True
        if isinstance(phi, S.Bot):
            return X == 0
        if isinstance(phi, (S.Rel, S.Eq)):
            return X & ~self.atom_mask(phi, env) == 0
        if isinstance(phi, (S.NRel, S.Neq)):
            return X & self.atom_mask(phi, env) == 0
        if isinstance(phi, S.TupleNeq):
            return X & ~self.atom_mask(phi, env) == 0
        if isinstance(phi, S.Not):
            return not self.sat(phi.body, X, env)
        if isinstance(phi, S.Or):
            return self.sat(phi.left, X, env) or self.sat(phi.right, X, env)
        if isinstance(phi, S.And):
            return self.sat(phi.left, X, env) and self.sat(phi.right, X, env)
        if isinstance(phi, S.Implies):
            return (not self.sat(phi.left, X, env)) or self.sat(phi.right, X, env)
        if isinstance(phi, S.Iff):
            return self.sat(phi.left, X, env) == self.sat(phi.right, X, env)
        if isinstance(phi, S.Exists):
            return any(self.sat(phi.body, X, {**env, phi.param: m}) for m in self.model.domain)
        if isinstance(phi, S.Forall):
            return all(self.sat(phi.body, X, {**env, phi.param: m}) for m in self.model.domain)
        if isinstance(phi, S.Diamond):
            return any(self.sat(phi.body, int(Y), env) for Y in self.game_posts(phi.game, X, env))
        if isinstance(phi, S.Box):
            return all(self.sat(phi.body, int(Y), env) for Y in self.game_posts(phi.game, X, env))
        if isinstance(phi, S.Tensor):
            subs = self.subteam_masks(X)
            left = np.array([Y for Y in subs if self.sat(phi.left, Y, env)], dtype=np.int64)
            if not len(left):
                return False
            right = np.array([Z for Z in subs if self.sat(phi.right, Z, env)], dtype=np.int64)
            if not len(right):
                return False
            return bool(X in K.or_product(left, right))
        if isinstance(phi, S.Announce):
            vals = self.values(phi.term, env)
            for m in self.model.domain:
                part = X & _mask_of(vals == m)
                if not self.sat(phi.body, part, env):
                    return False
            return True
        if isinstance(phi, S.SubDiamond):
            return any(self.sat(phi.body, Y, env) for Y in K.submasks(X))
        if isinstance(phi, S.SubBox):
            return all(self.sat(phi.body, Y, env) for Y in K.submasks(X))
        if isinstance(phi, S.IntImp):
            return all(
                self.sat(phi.right, Y, env) for Y in K.submasks(X) if self.sat(phi.left, Y, env)
            )
        if isinstance(phi, (S.Dep, S.Inc, S.Exc, S.Indep)):
            return self._team_atom(phi, X, env)
        raise TypeError(f"not a belief formula: {phi!r}")

    def _team_atom(self, phi, X, env) -> bool:
        rows = K.mask_bits(X)

        def tup(ts):
            v = self.tuple_values(ts, env)[rows]
            return [tuple(r) for r in v.tolist()]

        if isinstance(phi, S.Dep):
            keys, vals = tup(phi.terms[:-1]), tup(phi.terms[-1:])
            seen = {}
            for k, v in zip(keys, vals):
                if seen.setdefault(k, v) != v:
                    return False
            return True
        if isinstance(phi, S.Inc):
            return set(tup(phi.left)) <= set(tup(phi.right))
        if isinstance(phi, S.Exc):
            return not (set(tup(phi.left)) & set(tup(phi.right)))
        a, b, c = tup(phi.given), tup(phi.left), tup(phi.right)
        triples = set(zip(a, b, c))
        for (a1, b1, _) in triples:
            for (a2, _, c2) in triples:
                if a1 == a2 and (a1, b1, c2) not in triples:
                    return False
        return True


def _mask_of(flags) -> int:
    mask = 0
    for i in np.flatnonzero(flags):
        mask |= 1 << int(i)
    return mask


# ---------------------------------------------------------------------------
# strategy enumeration


class ReferenceGames:
    """Enumerates strategies clause by clause; each result is a unique row array."""

    def __init__(self, ev: Evaluator):
        self.ev = ev
        self.model = ev.model
        self.N = ev.N
        self._memo = {}
        self._merge = {}

    def identity(self, X: int) -> np.ndarray:
        row = np.zeros((1, self.N), dtype=np.int64)
        for s in K.mask_bits(X):
            row[0, s] = 1 << s
        return row

    def empty(self) -> np.ndarray:
        return np.zeros((0, self.N), dtype=np.int64)

    def fiber_mask(self, v: str, s: int) -> int:
        fib = self.model.fibers[self.model.var_index(v), s]
        mask = 0
        for t in fib:
            mask |= 1 << int(t)
        return mask

    def strats(self, g, X: int, env) -> np.ndarray:
        key = (g, X, _env_key(env, self.ev.free(g)))
        hit = self._memo.get(key)
        if hit is None:
            hit = self._memo[key] = self._strats(g, X, env)
        return hit

    def _strats(self, g, X, env) -> np.ndarray:
        ev = self.ev
        if isinstance(g, S.Eps):
            return self.identity(X)
        if isinstance(g, S.Test):
            return self.identity(X) if ev.sat(g.formula, X, env) else self.empty()
        if isinstance(g, S.ExistsVar):
            cols = K.mask_bits(X)
            opts = [K.nonempty_submasks(self.fiber_mask(g.var, s)) for s in cols]
            ev.check_budget(int(np.prod([len(o) for o in opts], dtype=float)), f"#{g.var}")
            return K.product_rows(cols, opts, self.N)
        if isinstance(g, S.ForallVar):
            row = np.zeros((1, self.N), dtype=np.int64)
            for s in K.mask_bits(X):
                row[0, s] = self.fiber_mask(g.var, s)
            return row
        if isinstance(g, S.Seq):
            return self._seq(g, X, env)
        if isinstance(g, S.Choice):
            return self._choice(g, X, env)
        if isinstance(g, S.Hide):
            A = self.strats(g.game, X, env)
            return A[K.independent_mask(A, self.equiv_pairs(X, g.hidden))]
        if isinstance(g, S.Star):
            return self._star(g, X, env)
        if isinstance(g, S.Par):
            A0 = self.strats(g.left, X, env)
            A1 = self.strats(g.right, X, env)
            ev.check_budget(len(A0) * len(A1), "parallel composition")
            merge = self.merge_table(S.affected_vars(g.left), S.affected_vars(g.right))
            return K.unique_rows(K.parallel_all(A0, A1, merge))
        raise TypeError(f"not a game formula: {g!r}")

    def _seq(self, g, X, env):
        A = self.strats(g.left, X, env)
        P = K.posts(A)
        parts = []
        for Z in np.unique(P):
            group = A[P == Z]
            B = self.strats(g.right, int(Z), env)
            if len(B):
                parts.extend(self._pairwise(K.compose_all, group, B, "sequential composition"))
        return self._merge_parts(parts, "sequential composition")

    def _pairwise(self, kernel, A, B, what):
        """``kernel`` over all pairs, in slices of ``A`` so no slice exceeds the budget."""
        step = max(1, min(len(A), PAIR_CHUNK // max(1, len(B))))
        if len(B) > self.ev.handle.max_intermediate:
            self.ev.check_budget(len(B), what)
        out = []
        for i in range(0, len(A), step):
            out.append(K.unique_rows(kernel(A[i:i + step], B)))
        if len(out) > 1:
            out = [self._merge_parts(out, what)]
        return out

    def _choice(self, g, X, env):
        parts = []
        pending = 0
        for X0 in K.submasks(X):
            rest = X & ~X0
            A0 = self.strats(g.left, X0, env)
            if not len(A0):
                continue
            for extra in K.submasks(X0):
                A1 = self.strats(g.right, rest | extra, env)
                if not len(A1):
                    continue
                parts.extend(self._pairwise(K.union_all, A0, A1, "choice"))
                pending += len(parts[-1])
                if pending > 200_000:
                    parts = [self._merge_parts(parts, "choice")]
                    pending = len(parts[0])
        return self._merge_parts(parts, "choice")

    def _merge_parts(self, parts, what):
        if not parts:
            return self.empty()
        out = K.unique_rows(np.concatenate(parts))
        self.ev.check_budget(len(out), what)
        return out

    def _star(self, g, X, env):
        seen = {}
        start = self.identity(X)
        seen[start[0].tobytes()] = start[0]
        frontier = start
        depth = 0
        while len(frontier):
            depth += 1
            if depth > self.ev.handle.max_star_depth:
                raise BudgetExceeded(
                    f"resource budget exceeded: iteration deeper than {self.ev.handle.max_star_depth}"
                )
            P = K.posts(frontier)
            fresh = []
            for Z in np.unique(P):
                B = self.strats(g.game, int(Z), env)
                if not len(B):
                    continue
                group = frontier[P == Z]
                for row in self._pairwise(K.compose_all, group, B, "iteration")[0]:
                    k = row.tobytes()
                    if k not in seen:
                        seen[k] = row
                        fresh.append(row)
            self.ev.check_budget(len(seen), "iteration")
            frontier = np.array(fresh, dtype=np.int64).reshape(-1, self.N)
        return K.unique_rows(np.array(list(seen.values()), dtype=np.int64))

    def equiv_pairs(self, X: int, hidden) -> np.ndarray:
        """Index pairs ``s < s'`` in ``X`` that agree outside ``hidden``."""
        M = self.model
        keep = [i for i, v in enumerate(M.team_vars) if v not in hidden]
        bits = K.mask_bits(X)
        vv = M.var_values[keep][:, bits] if keep else np.zeros((0, len(bits)), dtype=np.int64)
        pairs = []
        for a in range(len(bits)):
            for b in range(a + 1, len(bits)):
                if np.array_equal(vv[:, a], vv[:, b]):
                    pairs.append((bits[a], bits[b]))
        return np.array(pairs, dtype=np.int64).reshape(-1, 2)

    def merge_table(self, vars0, vars1) -> np.ndarray:
        key = (frozenset(vars0), frozenset(vars1))
        hit = self._merge.get(key)
        if hit is not None:
            return hit
        M = self.model
        vv = M.var_values
        idx = np.zeros((self.N, self.N, self.N), dtype=np.int64)
        for i, v in enumerate(M.team_vars):
            w = M.domain_size ** (len(M.team_vars) - 1 - i)
            if v in vars0:
                val = vv[i][None, :, None]
            elif v in vars1:
                val = vv[i][None, None, :]
            else:
                val = vv[i][:, None, None]
            idx = idx + val * w
        self._merge[key] = idx
        return idx


class StrategySet:
    """The strategies of a game formula with a fixed precondition.

    Iteration decodes rows lazily into :class:`Transition` values, in
    canonical (sorted-row) order, each distinct transition once.
    """

    def __init__(self, model: Model, rows: np.ndarray):
        self.model = model
        self.rows = K.unique_rows(rows) if len(rows) > 1 else rows

    def __len__(self):
        return len(self.rows)

    def __iter__(self):
        for row in self.rows:
            yield from_row(self.model, row)

    def __contains__(self, t) -> bool:
        if not isinstance(t, Transition):
            return False
        row = to_row(self.model, t)
        return bool(len(self.rows)) and bool((self.rows == row).all(axis=1).any())

    def posts(self) -> frozenset:
        return frozenset(self.model.mask_to_team(int(p)) for p in np.unique(K.posts(self.rows)))

    def pre_post_pairs(self) -> frozenset:
        return frozenset((t.prec, t.post) for t in self)


# ---------------------------------------------------------------------------
# public API


def _evaluator(model, engine) -> Evaluator:
    if isinstance(engine, Evaluator):
        return engine
    if isinstance(engine, str):
        engine = EngineHandle.from_env(engine)
    return Evaluator(model, engine)


def _check_env(node, env):
    missing = S.free_params(node) - set(env)
    if missing:
        raise EvaluationError(f"unbound variable {sorted(missing)[0]!r}")


def strategies(M: Model, g, X, env: Mapping | None = None, engine=None) -> StrategySet:
    env = dict(env or {})
    _check_env(g, env)
    ev = _evaluator(M, engine)
    return StrategySet(M, ev.reference.strats(g, M.team_to_mask(X), env))


def is_strategy(M: Model, t: Transition, g, env: Mapping | None = None, engine=None) -> bool:
    return t in strategies(M, g, t.prec, env, engine)


def satisfies(M: Model, X, phi, env: Mapping | None = None, engine=None) -> bool:
    """``M, X |= phi``; ``engine`` is an :class:`EngineHandle`, selector name or :class:`Evaluator`."""
    env = dict(env or {})
    _check_env(phi, env)
    ev = _evaluator(M, engine)
    return ev.sat(phi, M.team_to_mask(X), env)


def is_true(M: Model, phi, engine=None, max_assignments: int = 16) -> bool:
    """``phi`` holds in every team of ``M``."""
    if M.n_assignments > max_assignments:
        raise BudgetExceeded(
            f"resource budget exceeded: {M.n_assignments} assignments exceed the cap of {max_assignments}"
        )
    _check_env(phi, {})
    ev = _evaluator(M, engine)
    return all(ev.sat(phi, X, {}) for X in range(1 << M.n_assignments))
