"""Seeded random models, formulas and teams for differential testing."""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from translog import syntax as S
from translog.model import App, Const, Model, ParamVar, TeamVar

FRAGMENTS = ("transition-logic", "full")
KINDS = ("game", "sugar")
SUGAR_KINDS = (
    "tensor",
    "tuple-neq",
    "announce",
    "constancy",
    "dependence",
    "inclusion",
    "exclusion",
    "independence",
    "int-imp",
)


@dataclass(frozen=True)
class CorpusConfig:
    count: int = 50
    depth: int = 3
    domain_max: int = 2
    n_vars: int = 2
    fragment: str = "full"
    kind: str = "game"
    max_team: int = 4
    sugar_kinds: tuple = SUGAR_KINDS

    def __post_init__(self):
        if self.count < 0 or self.depth < 0 or self.max_team < 0:
            raise ValueError("corpus bounds must be non-negative")
        if not 1 <= self.domain_max <= 3:
            raise ValueError("domain_max must be between 1 and 3")
        if not 1 <= self.n_vars <= 2:
            raise ValueError("n_vars must be 1 or 2")
        if self.fragment not in FRAGMENTS:
            raise ValueError(f"unknown fragment {self.fragment!r}")
        if self.kind not in KINDS:
            raise ValueError(f"unknown corpus kind {self.kind!r}")
        unknown = set(self.sugar_kinds) - set(SUGAR_KINDS)
        if unknown:
            raise ValueError(f"unknown sugar kind {sorted(unknown)[0]!r}")


@dataclass(frozen=True)
class CorpusItem:
    model: Model
    formula: object
    teams: tuple  # team masks, ascending
    label: str = ""


@dataclass(frozen=True)
class Corpus:
    seed: int
    config: CorpusConfig
    items: tuple = field(default_factory=tuple)

    def __len__(self):
        return len(self.items)

    def __iter__(self):
        return iter(self.items)


# ---------------------------------------------------------------------------
# models and teams


VAR_NAMES = ("x", "y")


def random_model(rng: random.Random, domain: int, n_vars: int = 2) -> Model:
    dom = range(domain)
    R = [(a,) for a in dom if rng.random() < 0.5]
    S2 = [(a, b) for a in dom for b in dom if rng.random() < 0.5]
    f = {a: rng.randrange(domain) for a in dom}
    return Model(
        domain,
        VAR_NAMES[:n_vars],
        relations={"R": (1, R), "S": (2, S2)},
        functions={"f": (1, f)},
        constants={"c": rng.randrange(domain)},
    )


def small_teams(M: Model, max_team: int) -> tuple:
    """Every team mask of cardinality at most ``max_team``."""
    return tuple(X for X in range(1 << M.n_assignments) if bin(X).count("1") <= max_team)


# ---------------------------------------------------------------------------
# formulas


class FormulaGen:
    def __init__(self, rng: random.Random, team_vars, fragment: str = "full"):
        self.rng = rng
        self.vars = tuple(team_vars)
        self.fragment = fragment

    def term(self, params=()):
        pool = [TeamVar(v) for v in self.vars] + [Const("c")] + [ParamVar(p) for p in params]
        t = self.rng.choice(pool)
        if self.rng.random() < 0.2:
            t = App("f", (t,))
        return t

    def atom(self, params=()):
        r = self.rng.random()
        if r < 0.2:
            return S.Rel("R", (self.term(params),))
        if r < 0.3:
            return S.NRel("R", (self.term(params),))
        if r < 0.45:
            return S.Rel("S", (self.term(params), self.term(params)))
        if r < 0.65:
            return S.Eq(self.term(params), self.term(params))
        if r < 0.85:
            return S.Neq(self.term(params), self.term(params))
        if r < 0.95:
            return S.Dep((self.term(params),))
        return S.Top()

    def belief(self, depth: int, params=()):
        """A small belief formula; team-sensitive connectives appear often."""
        if depth <= 0:
            return self.atom(params)
        r = self.rng.random()
        sub = lambda: self.belief(depth - 1, params)  # noqa: E731
        if r < 0.3:
            return self.atom(params)
        if r < 0.5:
            return S.Or(sub(), sub())
        if r < 0.6:
            return S.Not(sub())
        if r < 0.7:
            return S.And(sub(), sub())
        if r < 0.8:
            return S.Dep(tuple(self.term(params) for _ in range(2)))
        if r < 0.9:
            p = f"$q{len(params)}"
            return S.Exists(p, self.belief(depth - 1, params + (p,)))
        return S.Diamond(self.game(0), sub())

    def atomic_game(self):
        r = self.rng.random()
        v = self.rng.choice(self.vars)
        if r < 0.15:
            return S.Eps()
        if r < 0.5:
            return S.ExistsVar(v)
        if r < 0.75:
            return S.ForallVar(v)
        return S.Test(self.atom())

    def game(self, depth: int):
        if depth <= 0:
            return self.atomic_game()
        rng = self.rng
        ops = ["atom", "seq", "choice", "star", "hide"]
        weights = [1, 3, 3, 1.5, 1.5]
        if self.fragment == "full" and len(self.vars) > 1:
            ops.append("par")
            weights.append(1.5)
        op = rng.choices(ops, weights)[0]
        if op == "atom":
            return self.atomic_game()
        if op == "seq":
            return S.Seq(self.game(rng.randrange(depth)), self.game(depth - 1))
        if op == "choice":
            return S.Choice(self.game(depth - 1), self.game(rng.randrange(depth)))
        if op == "star":
            return S.Star(self.game(depth - 1))
        if op == "hide":
            hidden = frozenset(rng.sample(self.vars, rng.randint(1, len(self.vars))))
            if self.fragment == "transition-logic":
                return S.Hide(S.ExistsVar(rng.choice(self.vars)), hidden)
            return S.Hide(self.game(depth - 1), hidden)
        left_vars = list(self.vars)
        rng.shuffle(left_vars)
        left = FormulaGen(rng, left_vars[:1], self.fragment).game(depth - 1)
        right = FormulaGen(rng, left_vars[1:], self.fragment).game(rng.randrange(depth))
        return S.Par(left, right)

    def tuple_pair(self, n: int):
        return tuple(self.term() for _ in range(n)), tuple(self.term() for _ in range(n))

    def sugar(self, kind: str):
        """A formula whose outermost connective is the given encodable construct."""
        rng = self.rng
        if kind == "tensor":
            return S.Tensor(self.belief(1), self.belief(1))
        if kind == "tuple-neq":
            left, right = self.tuple_pair(rng.randint(1, 2))
            return S.TupleNeq(left, right)
        if kind == "announce":
            return S.Announce(self.term(), self.belief(1))
        if kind == "constancy":
            return S.Dep((self.term(),))
        if kind == "dependence":
            return S.Dep(tuple(self.term() for _ in range(rng.randint(2, 3))))
        if kind == "inclusion":
            return S.Inc(*self.tuple_pair(rng.randint(1, 2)))
        if kind == "exclusion":
            return S.Exc(*self.tuple_pair(rng.randint(1, 2)))
        if kind == "independence":
            n = rng.randint(0, 1)
            return S.Indep(tuple(self.term() for _ in range(n)), (self.term(),), (self.term(),))
        if kind == "int-imp":
            return S.IntImp(self.belief(1), self.belief(1))
        raise ValueError(f"unknown sugar kind {kind!r}")


def gen_corpus(seed: int, config: CorpusConfig | None = None) -> Corpus:
    """Deterministic corpus: the same ``(seed, config)`` always yields the same items."""
    config = config or CorpusConfig()
    rng = random.Random(seed)
    items = []
    for i in range(config.count):
        M = random_model(rng, rng.randint(1, config.domain_max), config.n_vars)
        gen = FormulaGen(rng, M.team_vars, config.fragment)
        if config.kind == "game":
            phi = gen.game(rng.randint(0, config.depth))
            label = f"game-{i}"
        else:
            kind = config.sugar_kinds[i % len(config.sugar_kinds)]
            phi = gen.sugar(kind)
            label = kind
        teams = small_teams(M, config.max_team)
        items.append(CorpusItem(M, phi, teams, label))
    return Corpus(seed, config, tuple(items))


def enumerate_games(atoms, hidden_sets, depth: int, par: bool = True) -> list:
    """Every game of constructor depth at most ``depth`` over the given atoms.

    Each new level combines at least one game from the level below with any
    shallower game, so no formula is produced twice.
    """
    levels = [list(atoms)]
    for _ in range(depth):
        shallower = [g for level in levels for g in level]
        top = set(levels[-1])
        new = []
        for a in shallower:
            for b in shallower:
                if a not in top and b not in top:
                    continue
                new.append(S.Seq(a, b))
                new.append(S.Choice(a, b))
                if par and not (S.affected_vars(a) & S.affected_vars(b)):
                    new.append(S.Par(a, b))
        for a in levels[-1]:
            new.append(S.Star(a))
            new.extend(S.Hide(a, frozenset(W)) for W in hidden_sets)
        levels.append(new)
    return [g for level in levels for g in level]
