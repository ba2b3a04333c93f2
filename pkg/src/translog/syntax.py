"""Two-sorted formula ASTs: game formulas and belief formulas.

All nodes are frozen dataclasses, so structurally equal formulas compare and
hash equal. ``to_text`` renders any node in the concrete ASCII grammar
accepted by :mod:`translog.parser`, parenthesising every binary node.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Union

from translog.errors import FormulaSyntaxError
from translog.model import App, Const, ParamVar, TeamVar, term_params, term_team_vars


# ---------------------------------------------------------------------------
# game formulas


class Game:
    __slots__ = ()

    def __str__(self):
        return to_text(self)


@dataclass(frozen=True, eq=True)
class Eps(Game):
    pass


@dataclass(frozen=True)
class ExistsVar(Game):
    """``#v``: the existential player picks new values for ``v``."""

    var: str


@dataclass(frozen=True)
class ForallVar(Game):
    """``!v``: nature assigns every value to ``v``."""

    var: str


@dataclass(frozen=True)
class Seq(Game):
    left: Game
    right: Game


@dataclass(frozen=True)
class Choice(Game):
    left: Game
    right: Game


@dataclass(frozen=True)
class Test(Game):
    formula: "Belief"


@dataclass(frozen=True)
class Hide(Game):
    game: Game
    hidden: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "hidden", frozenset(self.hidden))


@dataclass(frozen=True)
class Star(Game):
    game: Game


@dataclass(frozen=True)
class Par(Game):
    left: Game
    right: Game

    def __post_init__(self):
        shared = affected_vars(self.left) & affected_vars(self.right)
        if shared:
            v = sorted(shared)[0]
            raise FormulaSyntaxError(f"parallel branches share affected variable {v}")


# ---------------------------------------------------------------------------
# belief formulas


class Belief:
    __slots__ = ()

    def __str__(self):
        return to_text(self)


@dataclass(frozen=True)
class Top(Belief):
    pass


@dataclass(frozen=True)
class Bot(Belief):
    pass


@dataclass(frozen=True)
class Rel(Belief):
    name: str
    args: tuple


@dataclass(frozen=True)
class NRel(Belief):
    """Dual (atomic) negation ``-R(t..)``."""

    name: str
    args: tuple


@dataclass(frozen=True)
class Eq(Belief):
    left: object
    right: object


@dataclass(frozen=True)
class Neq(Belief):
    left: object
    right: object


@dataclass(frozen=True)
class Not(Belief):
    """Contradictory negation ``~phi``."""

    body: Belief


@dataclass(frozen=True)
class Exists(Belief):
    param: str
    body: Belief


@dataclass(frozen=True)
class Forall(Belief):
    param: str
    body: Belief


@dataclass(frozen=True)
class Or(Belief):
    left: Belief
    right: Belief


@dataclass(frozen=True)
class And(Belief):
    left: Belief
    right: Belief


@dataclass(frozen=True)
class Implies(Belief):
    left: Belief
    right: Belief


@dataclass(frozen=True)
class Iff(Belief):
    left: Belief
    right: Belief


@dataclass(frozen=True)
class Diamond(Belief):
    game: Game
    body: Belief


@dataclass(frozen=True)
class Box(Belief):
    game: Game
    body: Belief


@dataclass(frozen=True)
class Tensor(Belief):
    left: Belief
    right: Belief


@dataclass(frozen=True)
class TupleNeq(Belief):
    left: tuple
    right: tuple

    def __post_init__(self):
        if len(self.left) != len(self.right):
            raise FormulaSyntaxError("tuple inequality needs tuples of equal length")


@dataclass(frozen=True)
class Announce(Belief):
    term: object
    body: Belief


@dataclass(frozen=True)
class Dep(Belief):
    """``dep(t1..tn)``; with a single term this is the constancy atom."""

    terms: tuple

    def __post_init__(self):
        if not self.terms:
            raise FormulaSyntaxError("dependence atom needs at least one term")


@dataclass(frozen=True)
class Inc(Belief):
    left: tuple
    right: tuple

    def __post_init__(self):
        if len(self.left) != len(self.right) or not self.left:
            raise FormulaSyntaxError("inclusion atom needs nonempty tuples of equal length")


@dataclass(frozen=True)
class Exc(Belief):
    left: tuple
    right: tuple

    def __post_init__(self):
        if len(self.left) != len(self.right) or not self.left:
            raise FormulaSyntaxError("exclusion atom needs nonempty tuples of equal length")


@dataclass(frozen=True)
class Indep(Belief):
    """``indep(a; b; c)``: given ``a``, ``b`` and ``c`` vary independently."""

    given: tuple
    left: tuple
    right: tuple


@dataclass(frozen=True)
class SubDiamond(Belief):
    body: Belief


@dataclass(frozen=True)
class SubBox(Belief):
    body: Belief


@dataclass(frozen=True)
class IntImp(Belief):
    left: Belief
    right: Belief


Formula = Union[Game, Belief]


def _cache_hash(cls):
    # Nodes are immutable and serve as memo keys; hash each subtree once.
    structural = cls.__hash__

    def __hash__(self):
        h = self.__dict__.get("_hash")
        if h is None:
            h = structural(self)
            object.__setattr__(self, "_hash", h)
        return h

    def __getstate__(self):
        # string hashes differ between processes, so never pickle the cache
        return {k: v for k, v in self.__dict__.items() if k != "_hash"}

    cls.__hash__ = __hash__
    cls.__getstate__ = __getstate__


for _cls in (*Game.__subclasses__(), *Belief.__subclasses__()):
    _cache_hash(_cls)

CORE_BELIEF = (Top, Rel, NRel, Eq, Neq, Not, Exists, Or, Diamond, SubDiamond, SubBox)
CORE_GAME = (Eps, ExistsVar, ForallVar, Seq, Choice, Test, Hide, Star, Par)


# ---------------------------------------------------------------------------
# traversal


def children(node) -> tuple:
    """Immediate formula children (games and beliefs, not terms)."""
    if isinstance(node, (Seq, Choice, Par, Or, And, Implies, Iff, Tensor, IntImp)):
        return (node.left, node.right)
    if isinstance(node, (Hide, Star)):
        return (node.game,)
    if isinstance(node, Test):
        return (node.formula,)
    if isinstance(node, (Diamond, Box)):
        return (node.game, node.body)
    if isinstance(node, (Not, Exists, Forall, Announce, SubDiamond, SubBox)):
        return (node.body,)
    return ()


def walk(node) -> Iterator:
    yield node
    for c in children(node):
        yield from walk(c)


def node_terms(node) -> tuple:
    if isinstance(node, (Rel, NRel, Dep)):
        return node.args if not isinstance(node, Dep) else node.terms
    if isinstance(node, (Eq, Neq)):
        return (node.left, node.right)
    if isinstance(node, (TupleNeq, Inc, Exc)):
        return node.left + node.right
    if isinstance(node, Indep):
        return node.given + node.left + node.right
    if isinstance(node, Announce):
        return (node.term,)
    return ()


def free_params(node) -> frozenset:
    if isinstance(node, (Exists, Forall)):
        return free_params(node.body) - {node.param}
    out = frozenset().union(*(term_params(t) for t in node_terms(node)))
    for c in children(node):
        out |= free_params(c)
    return out


def team_vars_of(node) -> frozenset:
    """Every team variable mentioned anywhere in the formula."""
    out = set()
    for n in walk(node):
        for t in node_terms(n):
            out |= term_team_vars(t)
        if isinstance(n, (ExistsVar, ForallVar)):
            out.add(n.var)
        if isinstance(n, Hide):
            out |= n.hidden
    return frozenset(out)


def affected_vars(g: Game) -> frozenset:
    if isinstance(g, (Eps, Test)):
        return frozenset()
    if isinstance(g, (ExistsVar, ForallVar)):
        return frozenset([g.var])
    if isinstance(g, (Seq, Choice, Par)):
        return affected_vars(g.left) | affected_vars(g.right)
    if isinstance(g, (Hide, Star)):
        return affected_vars(g.game)
    raise TypeError(f"not a game formula: {g!r}")


def game_depth(g: Game) -> int:
    """Nesting depth of game constructors; atomic games and tests have depth 0."""
    if isinstance(g, (Eps, ExistsVar, ForallVar, Test)):
        return 0
    if isinstance(g, (Hide, Star)):
        return 1 + game_depth(g.game)
    return 1 + max(game_depth(g.left), game_depth(g.right))


# ---------------------------------------------------------------------------
# Transition Logic fragment


@dataclass(frozen=True)
class FragmentReport:
    in_fragment: bool
    violations: tuple = ()

    def __str__(self):
        if self.in_fragment:
            return "in_fragment: true"
        lines = ["in_fragment: false"]
        lines += [f"{reason}: {to_text(node)}" for node, reason in self.violations]
        return "\n".join(lines)


def fragment_check(node) -> FragmentReport:
    violations = []
    for n in walk(node):
        if isinstance(n, Par):
            violations.append((n, "parallel-composition"))
        elif isinstance(n, Hide) and not isinstance(n.game, ExistsVar):
            violations.append((n, "non-quantifier-hiding"))
    return FragmentReport(not violations, tuple(violations))


# ---------------------------------------------------------------------------
# rendering


def _terms(ts) -> str:
    return ",".join(str(t) for t in ts)


def to_text(node) -> str:
    if isinstance(node, (TeamVar, ParamVar, Const, App)):
        return str(node)
    if isinstance(node, Eps):
        return "eps"
    if isinstance(node, ExistsVar):
        return f"#{node.var}"
    if isinstance(node, ForallVar):
        return f"!{node.var}"
    if isinstance(node, Seq):
        return f"({to_text(node.left)} ; {to_text(node.right)})"
    if isinstance(node, Choice):
        return f"({to_text(node.left)} + {to_text(node.right)})"
    if isinstance(node, Par):
        return f"({to_text(node.left)} || {to_text(node.right)})"
    if isinstance(node, Test):
        return f"?({to_text(node.formula)})"
    if isinstance(node, Hide):
        return f"{to_text(node.game)} / {{{','.join(sorted(node.hidden))}}}"
    if isinstance(node, Star):
        return f"{to_text(node.game)}*"

    if isinstance(node, Top):
        return "top"
    if isinstance(node, Bot):
        return "bot"
    if isinstance(node, Rel):
        return f"{node.name}({_terms(node.args)})"
    if isinstance(node, NRel):
        return f"-{node.name}({_terms(node.args)})"
    if isinstance(node, Eq):
        return f"{node.left} = {node.right}"
    if isinstance(node, Neq):
        return f"{node.left} != {node.right}"
    if isinstance(node, Not):
        return f"~{to_text(node.body)}"
    if isinstance(node, Exists):
        return f"E {node.param}. {to_text(node.body)}"
    if isinstance(node, Forall):
        return f"A {node.param}. {to_text(node.body)}"
    if isinstance(node, Diamond):
        return f"<{to_text(node.game)}> {to_text(node.body)}"
    if isinstance(node, Box):
        return f"[{to_text(node.game)}] {to_text(node.body)}"
    if isinstance(node, TupleNeq):
        return f"({_terms(node.left)}) != ({_terms(node.right)})"
    if isinstance(node, Announce):
        return f"delta {node.term}. {to_text(node.body)}"
    if isinstance(node, Dep):
        return f"dep({_terms(node.terms)})"
    if isinstance(node, Inc):
        return f"inc({_terms(node.left)}; {_terms(node.right)})"
    if isinstance(node, Exc):
        return f"exc({_terms(node.left)}; {_terms(node.right)})"
    if isinstance(node, Indep):
        return f"indep({_terms(node.given)}; {_terms(node.left)}; {_terms(node.right)})"
    if isinstance(node, SubDiamond):
        return f"<sub> {to_text(node.body)}"
    if isinstance(node, SubBox):
        return f"[sub] {to_text(node.body)}"
    ops = {Or: "\\/", And: "/\\", Implies: "->", Iff: "<->", Tensor: "(+)", IntImp: "~>"}
    for cls, op in ops.items():
        if isinstance(node, cls):
            return f"({to_text(node.left)} {op} {to_text(node.right)})"
    raise TypeError(f"cannot render {node!r}")
