"""Finite first-order models, terms, assignments and teams.

Domain elements are the integers ``0 .. domain_size - 1``. Assignments are
total over the model's declared team variables and are ordered
lexicographically by the order in which the variables were declared; that
order is also the canonical output order for teams.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence, Union

import numpy as np

from translog.errors import ChoiceFunctionError, EvaluationError, ModelError


# ---------------------------------------------------------------------------
# terms


@dataclass(frozen=True)
class Const:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class TeamVar:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class ParamVar:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class App:
    fn: str
    args: tuple

    def __str__(self):
        return f"{self.fn}({','.join(str(a) for a in self.args)})"


Term = Union[Const, TeamVar, ParamVar, App]


def term_team_vars(t) -> frozenset:
    if isinstance(t, TeamVar):
        return frozenset([t.name])
    if isinstance(t, App):
        return frozenset().union(*(term_team_vars(a) for a in t.args))
    return frozenset()


def term_params(t) -> frozenset:
    if isinstance(t, ParamVar):
        return frozenset([t.name])
    if isinstance(t, App):
        return frozenset().union(*(term_params(a) for a in t.args))
    return frozenset()


# ---------------------------------------------------------------------------
# assignments


@dataclass(frozen=True, order=True, slots=True)
class Assignment:
    """A total map from team variables to domain elements."""

    values: tuple
    vars: tuple

    def __getitem__(self, name: str) -> int:
        try:
            return self.values[self.vars.index(name)]
        except ValueError:
            raise EvaluationError(f"unbound variable {name!r}") from None

    def as_dict(self) -> dict:
        return dict(zip(self.vars, self.values))

    def __str__(self):
        return " ".join(f"{v}={m}" for v, m in zip(self.vars, self.values))

    def __repr__(self):
        return f"Assignment({self})"


def extend(s: Assignment, v: str, m: int, model: "Model | None" = None) -> Assignment:
    """The single-point update ``s[m/v]``."""
    if v not in s.vars:
        raise EvaluationError(f"unbound variable {v!r}")
    if m < 0 or (model is not None and m >= model.domain_size):
        raise ModelError(f"element {m} out of range")
    i = s.vars.index(v)
    return Assignment(s.values[:i] + (m,) + s.values[i + 1:], s.vars)


def equiv_mod(s: Assignment, s2: Assignment, hidden: Iterable[str]) -> bool:
    """True iff ``s`` and ``s2`` agree on every variable outside ``hidden``."""
    hidden = frozenset(hidden)
    return all(a == b for v, a, b in zip(s.vars, s.values, s2.values) if v not in hidden)


def format_team(team: Iterable[Assignment]) -> str:
    return "{" + "; ".join(str(s) for s in sorted(team)) + "}"


# ---------------------------------------------------------------------------
# models


class Model:
    """A finite first-order structure plus a declared set of team variables.

    ``relations`` maps a name to ``(arity, tuples)``; ``functions`` maps a
    name to ``(arity, table)`` where the table is either a mapping from
    argument tuples to values or an array of shape ``(domain_size,) * arity``.
    """

    def __init__(
        self,
        domain_size: int,
        team_vars: Sequence[str],
        relations: Mapping | None = None,
        functions: Mapping | None = None,
        constants: Mapping | None = None,
    ):
        if not isinstance(domain_size, (int, np.integer)) or domain_size < 1:
            raise ModelError("domain must be nonempty")
        self.domain_size = int(domain_size)
        team_vars = tuple(team_vars)
        if not team_vars:
            raise ModelError("team_vars must be nonempty")
        if len(set(team_vars)) != len(team_vars):
            raise ModelError("duplicate team variable")
        self.team_vars = team_vars

        d = self.domain_size
        self.relations = {}
        for name, (arity, tuples) in (relations or {}).items():
            rows = set()
            for tup in tuples:
                tup = tuple(int(a) for a in tup)
                if len(tup) != arity:
                    raise ModelError(f"relation {name}: tuple {tup} has wrong arity")
                self._check_elements(tup, f"relation {name}")
                rows.add(tup)
            self.relations[name] = (int(arity), frozenset(rows))

        self.functions = {}
        for name, (arity, table) in (functions or {}).items():
            if arity < 1:
                raise ModelError(f"function {name}: arity must be positive")
            arr = np.full((d,) * arity, -1, dtype=np.int64)
            if isinstance(table, Mapping):
                for args, val in table.items():
                    args = (args,) if isinstance(args, (int, np.integer)) else tuple(args)
                    if len(args) != arity:
                        raise ModelError(f"function {name}: entry {args} has wrong arity")
                    self._check_elements(args + (val,), f"function {name}")
                    arr[args] = val
            else:
                given = np.asarray(table, dtype=np.int64)
                if given.shape != arr.shape:
                    raise ModelError(f"function {name}: table has shape {given.shape}")
                arr[...] = given
                if (arr < 0).any() or (arr >= d).any():
                    raise ModelError(f"function {name}: element out of range")
            if (arr < 0).any():
                raise ModelError(f"function {name} not total")
            arr.setflags(write=False)
            self.functions[name] = (int(arity), arr)

        self.constants = {}
        for name, val in (constants or {}).items():
            self._check_elements((val,), f"constant {name}")
            self.constants[name] = int(val)

        k = len(team_vars)
        self.n_assignments = d**k
        self._weights = tuple(d ** (k - 1 - i) for i in range(k))
        self._assignments = None
        self._var_values = None
        self._fibers = None

    def _check_elements(self, elems, where):
        for a in elems:
            if not 0 <= int(a) < self.domain_size:
                raise ModelError(f"{where}: element {a} out of range")

    def __repr__(self):
        return (
            f"Model(domain_size={self.domain_size}, team_vars={self.team_vars}, "
            f"relations={sorted(self.relations)}, functions={sorted(self.functions)}, "
            f"constants={sorted(self.constants)})"
        )

    def digest(self) -> str:
        """Stable short hash of the model's content."""
        import hashlib

        h = hashlib.sha256()
        h.update(repr((self.domain_size, self.team_vars)).encode())
        for name in sorted(self.relations):
            arity, rows = self.relations[name]
            h.update(repr((name, arity, sorted(rows))).encode())
        for name in sorted(self.functions):
            arity, arr = self.functions[name]
            h.update(repr((name, arity, arr.tolist())).encode())
        h.update(repr(sorted(self.constants.items())).encode())
        return h.hexdigest()[:16]

    # -- assignments ---------------------------------------------------

    @property
    def domain(self) -> range:
        return range(self.domain_size)

    def var_index(self, v: str) -> int:
        try:
            return self.team_vars.index(v)
        except ValueError:
            raise EvaluationError(f"undeclared variable {v!r}") from None

    def assignments(self) -> list:
        """All of ``Ass_M`` in canonical order."""
        if self._assignments is None:
            self._assignments = [
                Assignment(vals, self.team_vars)
                for vals in itertools.product(range(self.domain_size), repeat=len(self.team_vars))
            ]
        return self._assignments

    def assignment(self, values=None, **kw) -> Assignment:
        if values is None:
            values = kw
        if isinstance(values, Mapping):
            if set(values) != set(self.team_vars):
                raise ModelError(f"assignment must bind exactly {self.team_vars}")
            values = tuple(values[v] for v in self.team_vars)
        values = tuple(int(m) for m in values)
        if len(values) != len(self.team_vars):
            raise ModelError(f"assignment must bind exactly {self.team_vars}")
        self._check_elements(values, "assignment")
        return Assignment(values, self.team_vars)

    def index(self, s: Assignment) -> int:
        return sum(m * w for m, w in zip(s.values, self._weights))

    def team(self, rows: Iterable) -> frozenset:
        return frozenset(r if isinstance(r, Assignment) else self.assignment(r) for r in rows)

    def all_assignments_team(self) -> frozenset:
        return frozenset(self.assignments())

    def all_teams(self, max_size: int | None = None):
        """Every team (subset of ``Ass_M``), smallest first."""
        ass = self.assignments()
        top = len(ass) if max_size is None else min(max_size, len(ass))
        for k in range(top + 1):
            for combo in itertools.combinations(ass, k):
                yield frozenset(combo)

    # -- packed (bitmask) views -----------------------------------------

    def team_to_mask(self, team: Iterable[Assignment]) -> int:
        mask = 0
        for s in team:
            mask |= 1 << self.index(s)
        return mask

    def mask_to_team(self, mask: int) -> frozenset:
        ass = self.assignments()
        out = []
        i = 0
        while mask:
            if mask & 1:
                out.append(ass[i])
            mask >>= 1
            i += 1
        return frozenset(out)

    @property
    def var_values(self) -> np.ndarray:
        """``var_values[i, a]`` is the value of variable ``i`` in assignment ``a``."""
        if self._var_values is None:
            idx = np.arange(self.n_assignments, dtype=np.int64)
            rows = [(idx // w) % self.domain_size for w in self._weights]
            vv = np.stack(rows)
            vv.setflags(write=False)
            self._var_values = vv
        return self._var_values

    @property
    def fibers(self) -> np.ndarray:
        """``fibers[i, a, m]`` is the index of ``a[m/v_i]``."""
        if self._fibers is None:
            d = self.domain_size
            vv = self.var_values
            idx = np.arange(self.n_assignments, dtype=np.int64)
            out = np.empty((len(self.team_vars), self.n_assignments, d), dtype=np.int64)
            for i, w in enumerate(self._weights):
                base = idx - vv[i] * w
                out[i] = base[:, None] + np.arange(d, dtype=np.int64)[None, :] * w
            out.setflags(write=False)
            self._fibers = out
        return self._fibers


# ---------------------------------------------------------------------------
# term evaluation


def eval_term(t, s: Assignment, env: Mapping, M: Model) -> int:
    if isinstance(t, TeamVar):
        if t.name not in M.team_vars:
            raise EvaluationError(f"unbound variable {t.name!r}")
        return s[t.name]
    if isinstance(t, ParamVar):
        try:
            return env[t.name]
        except KeyError:
            raise EvaluationError(f"unbound variable {t.name!r}") from None
    if isinstance(t, Const):
        try:
            return M.constants[t.name]
        except KeyError:
            raise EvaluationError(f"malformed term: unknown constant {t.name!r}") from None
    if isinstance(t, App):
        arity, table = _function(M, t)
        return int(table[tuple(eval_term(a, s, env, M) for a in t.args)])
    raise EvaluationError(f"malformed term: {t!r}")


def _function(M: Model, t: App):
    try:
        arity, table = M.functions[t.fn]
    except KeyError:
        raise EvaluationError(f"malformed term: unknown function {t.fn!r}") from None
    if arity != len(t.args):
        raise EvaluationError(f"malformed term: {t.fn} expects {arity} arguments")
    return arity, table


def term_values(t, env: Mapping, M: Model) -> np.ndarray:
    """Value of ``t`` under every assignment of ``Ass_M`` (canonical order)."""
    if isinstance(t, TeamVar):
        return M.var_values[M.var_index(t.name)]
    if isinstance(t, ParamVar):
        try:
            return np.full(M.n_assignments, env[t.name], dtype=np.int64)
        except KeyError:
            raise EvaluationError(f"unbound variable {t.name!r}") from None
    if isinstance(t, Const):
        if t.name not in M.constants:
            raise EvaluationError(f"malformed term: unknown constant {t.name!r}")
        return np.full(M.n_assignments, M.constants[t.name], dtype=np.int64)
    if isinstance(t, App):
        _, table = _function(M, t)
        return table[tuple(term_values(a, env, M) for a in t.args)]
    raise EvaluationError(f"malformed term: {t!r}")


# ---------------------------------------------------------------------------
# team builders


def supplement(X: Iterable[Assignment], v: str, F: Mapping) -> frozenset:
    """``X[F/v]``: replace ``v`` in each ``s`` by every value in ``F(s)``."""
    X = frozenset(X)
    if set(F) != X:
        raise ChoiceFunctionError("invalid choice function: must be defined on exactly X")
    out = set()
    for s in X:
        vals = F[s]
        if not vals:
            raise ChoiceFunctionError(f"invalid choice function: empty choice at {s}")
        out.update(extend(s, v, m) for m in vals)
    return frozenset(out)


def duplicate(X: Iterable[Assignment], v: str, M: Model) -> frozenset:
    """``X[M/v]``."""
    X = frozenset(X)
    M.var_index(v)
    return supplement(X, v, {s: M.domain for s in X})


def restrict(X: Iterable[Assignment], t, m: int, env: Mapping, M: Model) -> frozenset:
    """The subteam of ``X`` where ``t`` evaluates to ``m``."""
    return frozenset(s for s in X if eval_term(t, s, env, M) == m)
