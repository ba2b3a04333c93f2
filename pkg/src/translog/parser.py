"""Recursive-descent parser for the ASCII formula grammar.

Game formulas::

    eps  #x  !x  g1 ; g2  g1 + g2  g1 || g2  g / {x,y}  g*  ?(phi)

Belief formulas::

    top  bot  R(t,..)  -R(t,..)  t = u  t != u  ~phi  phi \\/ psi  phi /\\ psi
    phi -> psi  phi <-> psi  E p. phi  A p. phi  <g> phi  [g] phi
    phi (+) psi  (t1,..) != (u1,..)  delta t. phi  dep(t1,..,tn)
    inc(t..; u..)  exc(t..; u..)  indep(t..; u..; w..)  <sub> phi  [sub] phi
    phi ~> psi

Unary operators bind tightest, then ``;``, then ``+``/``||`` for games; for
beliefs ``/\\`` binds tighter than ``\\/``/``(+)``, which bind tighter than
the right-associative ``->``/``~>``, with ``<->`` loosest.
"""

from __future__ import annotations

import re
from typing import Iterable

from translog.errors import FormulaSyntaxError
from translog.model import App, Const, Model, ParamVar, TeamVar
from translog import syntax as S

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<op><->|->|~>|\(\+\)|\\/|/\\|\|\||!=|[()\[\]{}<>,.;+*/#!?=~-])
  | (?P<ident>[A-Za-z_$][A-Za-z0-9_$']*)
    """,
    re.VERBOSE,
)

_KEYWORDS = {"eps", "top", "bot", "delta", "dep", "inc", "exc", "indep", "sub"}


def tokenize(text: str) -> list:
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", pos, text)
        if m.lastgroup != "ws":
            toks.append((m.group(), pos))
        pos = m.end()
    toks.append(("<eof>", len(text)))
    return toks


class _Parser:
    def __init__(self, text, model=None, team_vars=None, constants=None, params=()):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0
        if model is not None:
            team_vars = model.team_vars if team_vars is None else team_vars
            constants = model.constants if constants is None else constants
            self.relations = {k: a for k, (a, _) in model.relations.items()}
            self.functions = {k: a for k, (a, _) in model.functions.items()}
        else:
            self.relations = None
            self.functions = None
        self.team_vars = None if team_vars is None else frozenset(team_vars)
        self.constants = frozenset(constants or ())
        self.scope = list(params)

    # -- token helpers --------------------------------------------------

    @property
    def tok(self):
        return self.toks[self.i][0]

    @property
    def pos(self):
        return self.toks[self.i][1]

    def peek(self, k=1):
        j = min(self.i + k, len(self.toks) - 1)
        return self.toks[j][0]

    def error(self, msg, pos=None):
        raise FormulaSyntaxError(msg, self.pos if pos is None else pos, self.text)

    def accept(self, tok):
        if self.tok == tok:
            self.i += 1
            return True
        return False

    def expect(self, tok):
        if self.tok != tok:
            self.error(f"expected {tok!r}, found {self.tok!r}")
        self.i += 1

    def ident(self):
        tok = self.tok
        if not _is_ident(tok):
            self.error(f"expected identifier, found {tok!r}")
        self.i += 1
        return tok

    def finish(self):
        if self.tok != "<eof>":
            self.error(f"unexpected {self.tok!r}")

    # -- names ----------------------------------------------------------

    def team_var(self, name, pos):
        if self.team_vars is not None and name not in self.team_vars:
            self.error(f"undeclared variable {name!r}", pos)
        return name

    def binder(self):
        pos = self.pos
        name = self.ident()
        if name in _KEYWORDS:
            self.error(f"keyword {name!r} cannot be bound", pos)
        if (self.team_vars is not None and name in self.team_vars) or name in self.constants:
            self.error(f"parameter {name!r} clashes with a team variable or constant", pos)
        return name

    # -- terms ----------------------------------------------------------

    def term(self):
        pos = self.pos
        name = self.ident()
        if name in _KEYWORDS:
            self.error(f"keyword {name!r} used as a term", pos)
        if self.tok == "(":
            self.i += 1
            args = self.term_list(")")
            self.expect(")")
            if self.functions is not None:
                if name not in self.functions:
                    self.error(f"unknown function {name!r}", pos)
                if self.functions[name] != len(args):
                    self.error(f"function {name} expects {self.functions[name]} arguments", pos)
            return App(name, tuple(args))
        if name in self.scope or name.startswith("$"):
            return ParamVar(name)
        if name in self.constants:
            return Const(name)
        if self.team_vars is None or name in self.team_vars:
            return TeamVar(name)
        self.error(f"undeclared variable {name!r}", pos)

    def term_list(self, *stops):
        """Possibly empty comma-separated terms, ending before any of ``stops``."""
        if self.tok in stops:
            return []
        out = [self.term()]
        while self.accept(","):
            out.append(self.term())
        return out

    # -- games ----------------------------------------------------------

    def game(self):
        left = self.game_seq()
        while self.tok in ("+", "||"):
            op, pos = self.tok, self.pos
            self.i += 1
            right = self.game_seq()
            if op == "+":
                left = S.Choice(left, right)
            else:
                try:
                    left = S.Par(left, right)
                except FormulaSyntaxError as e:
                    self.error(str(e), pos)
        return left

    def game_seq(self):
        left = self.game_post()
        while self.accept(";"):
            left = S.Seq(left, self.game_post())
        return left

    def game_post(self):
        g = self.game_prim()
        while True:
            if self.accept("*"):
                g = S.Star(g)
            elif self.tok == "/":
                self.i += 1
                self.expect("{")
                names = []
                if self.tok != "}":
                    names.append(self.team_var(self.ident(), self.pos))
                    while self.accept(","):
                        pos = self.pos
                        names.append(self.team_var(self.ident(), pos))
                self.expect("}")
                g = S.Hide(g, frozenset(names))
            else:
                return g

    def game_prim(self):
        tok, pos = self.tok, self.pos
        if tok == "eps":
            self.i += 1
            return S.Eps()
        if tok in ("#", "!"):
            self.i += 1
            vpos = self.pos
            v = self.team_var(self.ident(), vpos)
            return S.ExistsVar(v) if tok == "#" else S.ForallVar(v)
        if tok == "?":
            self.i += 1
            self.expect("(")
            phi = self.belief()
            self.expect(")")
            return S.Test(phi)
        if tok == "(":
            self.i += 1
            g = self.game()
            self.expect(")")
            return g
        self.error(f"expected a game formula, found {tok!r}")

    # -- beliefs --------------------------------------------------------

    def belief(self):
        left = self.belief_imp()
        while self.accept("<->"):
            left = S.Iff(left, self.belief_imp())
        return left

    def belief_imp(self):
        left = self.belief_disj()
        if self.tok in ("->", "~>"):
            op = self.tok
            self.i += 1
            right = self.belief_imp()
            return S.Implies(left, right) if op == "->" else S.IntImp(left, right)
        return left

    def belief_disj(self):
        left = self.belief_conj()
        while self.tok in ("\\/", "(+)"):
            op = self.tok
            self.i += 1
            right = self.belief_conj()
            left = S.Or(left, right) if op == "\\/" else S.Tensor(left, right)
        return left

    def belief_conj(self):
        left = self.belief_unary()
        while self.accept("/\\"):
            left = S.And(left, self.belief_unary())
        return left

    def belief_unary(self):
        tok = self.tok
        if tok == "~":
            self.i += 1
            return S.Not(self.belief_unary())
        if tok == "<" and self.peek() == "sub" and self.peek(2) == ">":
            self.i += 3
            return S.SubDiamond(self.belief_unary())
        if tok == "[" and self.peek() == "sub" and self.peek(2) == "]":
            self.i += 3
            return S.SubBox(self.belief_unary())
        if tok in ("<", "["):
            close = ">" if tok == "<" else "]"
            self.i += 1
            g = self.game()
            self.expect(close)
            body = self.belief_unary()
            return S.Diamond(g, body) if tok == "<" else S.Box(g, body)
        if tok in ("E", "A") and _is_ident(self.peek()) and self.peek(2) == ".":
            self.i += 1
            p = self.binder()
            self.expect(".")
            self.scope.append(p)
            try:
                body = self.belief_unary()
            finally:
                self.scope.pop()
            return S.Exists(p, body) if tok == "E" else S.Forall(p, body)
        if tok == "delta":
            self.i += 1
            t = self.term()
            self.expect(".")
            return S.Announce(t, self.belief_unary())
        return self.belief_atom()

    def belief_atom(self):
        tok, pos = self.tok, self.pos
        if tok == "top":
            self.i += 1
            return S.Top()
        if tok == "bot":
            self.i += 1
            return S.Bot()
        if tok == "-":
            self.i += 1
            name = self.ident()
            args = self.relation_args(name, pos)
            return S.NRel(name, args)
        if tok in ("dep", "inc", "exc", "indep") and self.peek() == "(":
            return self.team_atom()
        if tok == "(":
            tup = self.try_tuple_neq()
            if tup is not None:
                return tup
            self.i += 1
            phi = self.belief()
            self.expect(")")
            return phi
        if _is_ident(tok) and self.peek() == "(" and tok not in _KEYWORDS:
            if self.relations is not None and tok in self.relations:
                name = self.ident()
                return S.Rel(name, self.relation_args(name, pos))
            save = self.i
            t = self.term_unchecked_app()
            if self.tok in ("=", "!="):
                self.i = save
            else:
                return S.Rel(t.fn, t.args) if self.relations is None else self.unknown_relation(t, pos)
        if _is_ident(tok):
            left = self.term()
            op = self.tok
            if op not in ("=", "!="):
                self.error(f"expected '=' or '!=' after term, found {op!r}")
            self.i += 1
            right = self.term()
            return S.Eq(left, right) if op == "=" else S.Neq(left, right)
        self.error(f"expected a belief formula, found {tok!r}")

    def unknown_relation(self, t, pos):
        self.error(f"unknown relation {t.fn!r}", pos)

    def term_unchecked_app(self):
        name = self.ident()
        self.expect("(")
        args = self.term_list(")")
        self.expect(")")
        return App(name, tuple(args))

    def relation_args(self, name, pos):
        self.expect("(")
        args = tuple(self.term_list(")"))
        self.expect(")")
        if self.relations is not None:
            if name not in self.relations:
                self.error(f"unknown relation {name!r}", pos)
            if self.relations[name] != len(args):
                self.error(f"relation {name} expects {self.relations[name]} arguments", pos)
        return args

    def team_atom(self):
        kind, pos = self.tok, self.pos
        self.i += 1
        self.expect("(")
        groups = [self.term_list(";", ")")]
        while self.accept(";"):
            groups.append(self.term_list(";", ")"))
        self.expect(")")
        want = {"dep": 1, "inc": 2, "exc": 2, "indep": 3}[kind]
        if len(groups) != want:
            self.error(f"{kind} expects {want} ';'-separated term lists", pos)
        groups = [tuple(g) for g in groups]
        try:
            if kind == "dep":
                return S.Dep(groups[0])
            if kind == "inc":
                return S.Inc(*groups)
            if kind == "exc":
                return S.Exc(*groups)
            return S.Indep(*groups)
        except FormulaSyntaxError as e:
            self.error(str(e), pos)

    def try_tuple_neq(self):
        save = self.i
        try:
            self.expect("(")
            left = self.term_list(")")
            self.expect(")")
            self.expect("!=")
            self.expect("(")
            right = self.term_list(")")
            self.expect(")")
        except FormulaSyntaxError:
            self.i = save
            return None
        if len(left) != len(right):
            self.error("tuple inequality needs tuples of equal length")
        return S.TupleNeq(tuple(left), tuple(right))


def _is_ident(tok: str) -> bool:
    return bool(tok) and (tok[0].isalpha() or tok[0] in "_$")


def parse_game(
    text: str,
    model: Model | None = None,
    *,
    team_vars: Iterable[str] | None = None,
    constants: Iterable[str] | None = None,
    params: Iterable[str] = (),
) -> S.Game:
    """Parse a game formula.

    With a model (or explicit ``team_vars``) every variable must be declared;
    otherwise unknown identifiers are read as team variables.
    """
    p = _Parser(text, model, team_vars, constants, params)
    g = p.game()
    p.finish()
    return g


def parse_belief(
    text: str,
    model: Model | None = None,
    *,
    team_vars: Iterable[str] | None = None,
    constants: Iterable[str] | None = None,
    params: Iterable[str] = (),
) -> S.Belief:
    p = _Parser(text, model, team_vars, constants, params)
    phi = p.belief()
    p.finish()
    return phi


def parse_formula(text: str, model: Model | None = None, **kw):
    """Parse as a belief formula, falling back to a game formula."""
    try:
        return parse_belief(text, model, **kw)
    except FormulaSyntaxError as belief_err:
        try:
            return parse_game(text, model, **kw)
        except FormulaSyntaxError:
            raise belief_err from None
