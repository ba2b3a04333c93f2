import pytest

from translog import syntax as S
from translog.desugar import desugar, is_core
from translog.errors import FormulaSyntaxError
from translog.fixtures import m2
from translog.model import App, Const, ParamVar, TeamVar
from translog.parser import parse_belief, parse_formula, parse_game

x, y = TeamVar("x"), TeamVar("y")


class TestParser:
    def test_sequence(self):
        assert parse_game("eps ; #x") == S.Seq(S.Eps(), S.ExistsVar("x"))

    def test_parallel_overlap_rejected(self):
        with pytest.raises(FormulaSyntaxError, match="parallel branches share affected variable x"):
            parse_game("#x || #x")

    def test_diamond(self):
        phi = parse_belief("<#x ; !y> x = y")
        assert phi == S.Diamond(S.Seq(S.ExistsVar("x"), S.ForallVar("y")), S.Eq(x, y))

    def test_precedence_of_game_operators(self):
        g = parse_game("#x ; !y + eps")
        assert g == S.Choice(S.Seq(S.ExistsVar("x"), S.ForallVar("y")), S.Eps())
        assert parse_game("#x / {y}*") == S.Star(S.Hide(S.ExistsVar("x"), {"y"}))

    def test_connective_associativity(self):
        a, b, c = (S.Rel("R", (t,)) for t in (x, y, Const("c")))
        M = m2()
        assert parse_belief("R(x) \\/ R(y) \\/ R(c)", M) == S.Or(S.Or(a, b), c)
        assert parse_belief("R(x) -> R(y) -> R(c)", M) == S.Implies(a, S.Implies(b, c))
        assert parse_belief("R(x) ~> R(y) ~> R(c)", M) == S.IntImp(a, S.IntImp(b, c))

    def test_conjunction_binds_tighter_than_disjunction(self):
        a, b, c = (S.Rel("R", (t,)) for t in (x, y, Const("c")))
        assert parse_belief("R(x) \\/ R(y) /\\ R(c)", m2()) == S.Or(a, S.And(b, c))

    def test_team_atoms(self):
        assert parse_belief("dep(x, f(y))") == S.Dep((x, App("f", (y,))))
        assert parse_belief("inc(x, y; y, x)") == S.Inc((x, y), (y, x))
        assert parse_belief("indep(x; y; c)", m2()) == S.Indep((x,), (y,), (Const("c"),))
        assert parse_belief("(x, y) != (y, x)") == S.TupleNeq((x, y), (y, x))

    def test_quantifiers_and_announcement(self):
        phi = parse_belief("E $p. A $q. delta x. $p = $q")
        assert phi == S.Exists("$p", S.Forall("$q", S.Announce(x, S.Eq(ParamVar("$p"), ParamVar("$q")))))

    def test_undeclared_variable_rejected(self):
        with pytest.raises(FormulaSyntaxError, match="undeclared variable 'z'"):
            parse_belief("z = x", m2())

    def test_unknown_symbol_with_model(self):
        with pytest.raises(FormulaSyntaxError):
            parse_belief("Q(x)", m2())

    def test_error_position(self):
        with pytest.raises(FormulaSyntaxError, match="position"):
            parse_game("#x ; ; eps")

    def test_inclusion_arity_mismatch(self):
        with pytest.raises(FormulaSyntaxError):
            parse_belief("inc(x, y; x)")

    @pytest.mark.parametrize(
        "text",
        [
            "<(#x ; !y) / {y}> dep(x)",
            "[(#x + !y)*] (R(x) (+) -R(x))",
            "(x, f(y)) != (c, y) <-> inc(x; y)",
            "<sub> [sub] (R(x) ~> ~R(y))",
            "delta f(x). indep(; x; y)",
            "A $p. E $q. (S($p, $q) /\\ exc(x; $q))",
            "bot \\/ top",
        ],
    )
    def test_round_trip(self, text):
        M = m2()
        phi = parse_belief(text, M)
        assert parse_belief(S.to_text(phi), M) == phi

    def test_identifiers_default_to_team_variables(self):
        assert parse_belief("R(c)") == S.Rel("R", (TeamVar("c"),))

    def test_parse_formula_dispatch(self):
        assert isinstance(parse_formula("#x ; !y"), S.Game)
        assert isinstance(parse_formula("<#x> top"), S.Belief)


class TestAffectedVars:
    def test_clauses(self):
        assert S.affected_vars(S.Eps()) == frozenset()
        assert S.affected_vars(parse_game("#x ; !y")) == {"x", "y"}
        assert S.affected_vars(parse_game("#x / {y}")) == {"x"}
        assert S.affected_vars(parse_game("?(<#x> top)")) == frozenset()
        assert S.affected_vars(parse_game("(#x || !y)*")) == {"x", "y"}


class TestFragment:
    def test_quantifier_hiding_allowed(self):
        assert S.fragment_check(parse_game("#x / {y}")).in_fragment

    def test_general_hiding_flagged(self):
        report = S.fragment_check(parse_game("(#x ; #y) / {y}"))
        assert not report.in_fragment
        assert [r for _, r in report.violations] == ["non-quantifier-hiding"]

    def test_parallel_flagged(self):
        report = S.fragment_check(parse_game("#x || #y"))
        assert [r for _, r in report.violations] == ["parallel-composition"]

    def test_nested_in_belief(self):
        report = S.fragment_check(parse_belief("<?(<#x || #y> top)> top"))
        assert not report.in_fragment

    def test_report_text(self):
        assert str(S.fragment_check(parse_game("#x || #y"))) == (
            "in_fragment: false\nparallel-composition: (#x || #y)"
        )


class TestDesugar:
    def test_constancy(self):
        assert desugar(parse_belief("dep(x)")) == S.Exists("$1", S.Eq(x, ParamVar("$1")))

    def test_tensor(self):
        phi = parse_belief("R(x) (+) -R(x)")
        expected = S.Diamond(S.Choice(S.Test(S.Rel("R", (x,))), S.Test(S.NRel("R", (x,)))), S.Top())
        assert desugar(phi) == expected

    def test_intuitionistic_implication(self):
        a, b = S.Rel("R", (x,)), S.Rel("R", (y,))
        assert desugar(S.IntImp(a, b)) == S.SubBox(desugar(S.Implies(a, b)))

    def test_dependence_unfolds_through_announcement(self):
        p1, p2 = ParamVar("$1"), ParamVar("$2")
        # dep(x,y) -> delta x. dep(y) -> A $1 ($1 != x (+) ($1 = x /\ E $2 (y = $2)))
        expected = S.Forall(
            "$1",
            S.Tensor(S.Neq(p1, x), S.And(S.Eq(p1, x), S.Exists("$2", S.Eq(y, p2)))),
        )
        assert desugar(parse_belief("dep(x, y)")) == desugar(expected)

    def test_fresh_names_avoid_existing(self):
        phi = parse_belief("E $1. dep($1)")
        assert "$2" in S.to_text(desugar(phi))

    @pytest.mark.parametrize(
        "text",
        [
            "bot",
            "R(x) /\\ R(y)",
            "R(x) -> R(y)",
            "R(x) <-> R(y)",
            "A $p. x = $p",
            "[#x] R(x)",
            "(x, y) != (y, c)",
            "delta x. R(y)",
            "dep(x, y, c)",
            "inc(x; y)",
            "exc(x, y; y, x)",
            "indep(x; y; c)",
            "R(x) ~> R(y)",
        ],
    )
    def test_output_is_core_and_in_fragment(self, text):
        out = desugar(parse_belief(text))
        assert is_core(out)
        assert S.fragment_check(out).in_fragment
        assert desugar(out) == out

    def test_core_input_unchanged(self):
        phi = parse_belief("<#x ; ?(R(x))> ~(x = y \\/ E $p. S(x, $p))")
        assert desugar(phi) == phi


def test_game_depth():
    assert S.game_depth(parse_game("#x")) == 0
    assert S.game_depth(parse_game("#x / {y}")) == 1
    assert S.game_depth(parse_game("(#x ; !y)*")) == 2
