"""Property suites, each run for at least 1000 generated cases.

Collected through ``test_acceptance.py``; ``RUNS`` counts executed cases per property.
"""

from collections import Counter

import numpy as np
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from translog import syntax as S
from translog.desugar import desugar, is_core
from translog.model import App, Const, Model, TeamVar, restrict
from translog.parser import parse_belief
from translog.reference import Evaluator
from translog.transitions import Transition, compose, parallel, union

CASES = 1000
RUNS = Counter()
PROPERTY = settings(max_examples=CASES, deadline=None, suppress_health_check=[HealthCheck.too_slow])

_models = {}


def model(domain: int, n_vars: int, seed: int) -> Model:
    key = (domain, n_vars, seed)
    if key not in _models:
        rng = np.random.default_rng(seed)
        _models[key] = Model(
            domain,
            ("x", "y")[:n_vars],
            relations={"R": (1, [(a,) for a in range(domain) if rng.random() < 0.5])},
            functions={"f": (1, rng.integers(0, domain, size=domain))},
            constants={"c": int(rng.integers(domain))},
        )
    return _models[key]


models = st.builds(model, st.integers(1, 3), st.integers(1, 2), st.integers(0, 7))
small_models = st.builds(model, st.integers(1, 2), st.just(2), st.integers(0, 7))


@st.composite
def transitions(draw, M, prec=None):
    ass = M.assignments()
    N = len(ass)
    if prec is None:
        prec = [a for a in ass if draw(st.booleans())]
    return Transition({s: M.mask_to_team(draw(st.integers(1, (1 << N) - 1))) for s in prec})


@st.composite
def model_and_transitions(draw, k):
    M = draw(st.builds(model, st.integers(1, 2), st.integers(1, 2), st.just(0)))
    out = [draw(transitions(M))]
    for _ in range(k - 1):
        out.append(draw(transitions(M, prec=sorted(out[-1].post))))
    return M, out


def terms(vars_):
    leaves = st.sampled_from([TeamVar(v) for v in vars_] + [Const("c")])
    return st.recursive(leaves, lambda t: st.builds(lambda a: App("f", (a,)), t), max_leaves=3)


def atoms(vars_):
    t = terms(vars_)
    return st.one_of(
        st.builds(lambda a: S.Rel("R", (a,)), t),
        st.builds(lambda a: S.NRel("R", (a,)), t),
        st.builds(S.Eq, t, t),
        st.builds(S.Neq, t, t),
        st.builds(lambda a: S.Dep((a,)), t),
    )


def games(vars_, leaves=5):
    base = st.one_of(
        st.just(S.Eps()),
        st.sampled_from([S.ExistsVar(v) for v in vars_]),
        st.sampled_from([S.ForallVar(v) for v in vars_]),
        st.builds(S.Test, atoms(vars_)),
    )
    hidden = st.frozensets(st.sampled_from(vars_), min_size=1)

    def extend(g):
        return st.one_of(
            st.builds(S.Seq, g, g),
            st.builds(S.Choice, g, g),
            st.builds(S.Star, g),
            st.builds(S.Hide, g, hidden),
        )

    return st.recursive(base, extend, max_leaves=leaves)


@st.composite
def game_setting(draw, leaves=4, max_team=2):
    M = draw(small_models)
    g = draw(games(M.team_vars, leaves))
    if len(M.team_vars) > 1 and draw(st.booleans()):
        g = S.Par(g if S.affected_vars(g) <= {"x"} else S.ExistsVar("x"), draw(games(("y",), 2)))
    size = draw(st.integers(0, min(max_team, M.n_assignments)))
    X = draw(st.lists(st.integers(0, M.n_assignments - 1), min_size=size, max_size=size, unique=True))
    return M, g, sum(1 << i for i in X)


def beliefs(vars_):
    t = terms(vars_)
    tup = st.integers(1, 2).flatmap(lambda n: st.tuples(st.tuples(*[t] * n), st.tuples(*[t] * n)))
    base = st.one_of(
        atoms(vars_),
        st.just(S.Top()),
        st.just(S.Bot()),
        st.builds(lambda p: S.Dep(p[0] + p[1]), tup),
        st.builds(lambda p: S.Inc(*p), tup),
        st.builds(lambda p: S.Exc(*p), tup),
        st.builds(lambda p: S.TupleNeq(*p), tup),
        st.builds(lambda a, b, c: S.Indep((a,), (b,), (c,)), t, t, t),
    )

    def extend(phi):
        return st.one_of(
            st.builds(S.Or, phi, phi),
            st.builds(S.And, phi, phi),
            st.builds(S.Implies, phi, phi),
            st.builds(S.Iff, phi, phi),
            st.builds(S.Tensor, phi, phi),
            st.builds(S.IntImp, phi, phi),
            st.builds(S.Not, phi),
            st.builds(S.SubDiamond, phi),
            st.builds(S.SubBox, phi),
            st.builds(S.Announce, t, phi),
            st.builds(S.Box, games(vars_, 2), phi),
            st.builds(S.Diamond, games(vars_, 2), phi),
            st.builds(lambda b: S.Forall("$p", b), phi),
        )

    return st.recursive(base, extend, max_leaves=6)


# -- transition-image nonemptiness ------------------------------------------


@PROPERTY
@given(model_and_transitions(2), st.data())
def test_images_nonempty_at_every_construction(mt, data):
    RUNS["test_images_nonempty_at_every_construction"] += 1
    M, (t1, t2) = mt
    t3 = data.draw(transitions(M, prec=sorted(t1.prec)))
    made = [compose(t1, t2), union(t1, t2), union(t1, t3)]
    if "y" in M.team_vars:
        made.append(parallel(t1, t3, ("x",), ("y",)))
    for t in made:
        assert all(len(t(s)) > 0 for s in t.prec)


@PROPERTY
@given(game_setting())
def test_strategy_rows_nonempty_exactly_on_prec(setting):
    RUNS["test_strategy_rows_nonempty_exactly_on_prec"] += 1
    M, g, X = setting
    rows = Evaluator(M).reference.strats(g, X, {})
    for row in rows:
        assert sum(1 << i for i, m in enumerate(row) if m) == X


# -- compose / union laws ----------------------------------------------------


@PROPERTY
@given(model_and_transitions(3), st.data())
def test_compose_and_union_laws(mt, data):
    RUNS["test_compose_and_union_laws"] += 1
    M, (t1, t2, t3) = mt
    assert compose(compose(t1, t2), t3) == compose(t1, compose(t2, t3))
    c = compose(t1, t2)
    assert c.prec == t1.prec and c.post <= t2.post
    assert compose(Transition.identity(t1.prec), t1) == t1 == compose(t1, Transition.identity(t1.post))
    u1, u2 = data.draw(transitions(M)), data.draw(transitions(M))
    assert union(t1, u1) == union(u1, t1)
    assert union(union(t1, u1), u2) == union(t1, union(u1, u2))
    assert union(t1, t1) == t1
    u = union(t1, u1)
    assert u.prec == t1.prec | u1.prec and u.post == t1.post | u1.post


# -- frame property ----------------------------------------------------------


@PROPERTY
@given(game_setting())
def test_frame_property(setting):
    RUNS["test_frame_property"] += 1
    M, g, X = setting
    keep = [i for i, v in enumerate(M.team_vars) if v not in S.affected_vars(g)]
    vv = M.var_values
    for row in Evaluator(M).reference.strats(g, X, {}):
        for s, img in enumerate(row):
            for u in range(M.n_assignments):
                if img >> u & 1:
                    assert all(vv[i, u] == vv[i, s] for i in keep)


# -- restrict partition ------------------------------------------------------


@PROPERTY
@given(models.flatmap(lambda M: st.tuples(st.just(M), st.sets(st.sampled_from(M.assignments())),
                                          terms(M.team_vars))))
def test_restrict_partition(args):
    RUNS["test_restrict_partition"] += 1
    M, X, t = args
    parts = [restrict(X, t, m, {}, M) for m in M.domain]
    assert frozenset().union(*parts) == X
    assert sum(len(p) for p in parts) == len(X)


# -- desugar idempotence -----------------------------------------------------


@PROPERTY
@given(beliefs(("x", "y")))
def test_desugar_idempotent(phi):
    RUNS["test_desugar_idempotent"] += 1
    once = desugar(phi)
    assert is_core(once)
    assert desugar(once) == once
    assert parse_belief(S.to_text(once), team_vars=("x", "y"), constants=("c",)) == once


# -- star unit ---------------------------------------------------------------


@PROPERTY
@given(game_setting(leaves=3, max_team=3))
def test_star_unit(setting):
    RUNS["test_star_unit"] += 1
    M, g, X = setting
    ev = Evaluator(M)
    rows = ev.reference.strats(S.Star(g), X, {})
    identity = [(1 << s) if X >> s & 1 else 0 for s in range(M.n_assignments)]
    assert any(list(r) == identity for r in rows)
    if S.fragment_check(g).in_fragment:
        assert X in ev.transition.succ(S.Star(g), X, {}).tolist()


SUITES = {
    "nonempty images": [test_images_nonempty_at_every_construction, test_strategy_rows_nonempty_exactly_on_prec],
    "compose/union laws": [test_compose_and_union_laws],
    "frame property": [test_frame_property],
    "restrict partition": [test_restrict_partition],
    "desugar idempotence": [test_desugar_idempotent],
    "star unit": [test_star_unit],
}
