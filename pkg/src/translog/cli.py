"""Command-line interface.

Exit codes: 0 true/agree, 1 false/disagree, 2 usage or parse error,
3 resource budget exceeded.
"""

from __future__ import annotations

import argparse
import sys

from translog import syntax as S
from translog.corpus import CorpusConfig, gen_corpus
from translog.diff import DiffSummary, run_diff
from translog.errors import BudgetExceeded, TranslogError
from translog.model import format_team
from translog.modelfile import load_model, parse_team
from translog.parser import parse_belief, parse_game
from translog.reference import EngineHandle, Evaluator, strategies
from translog.transition_engine import successors

EXIT_OK, EXIT_FALSE, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


def _handle(args) -> EngineHandle:
    return EngineHandle.from_env(getattr(args, "engine", "reference"))


def _team_key(team):
    return (len(team), sorted(team))


def cmd_check(args) -> int:
    M = load_model(args.model)
    X = parse_team(args.team, M)
    phi = parse_belief(args.formula, M)
    ok = Evaluator(M, _handle(args)).sat(phi, M.team_to_mask(X), {})
    print("SAT" if ok else "UNSAT")
    return EXIT_OK if ok else EXIT_FALSE


def cmd_truth(args) -> int:
    M = load_model(args.model)
    phi = parse_belief(args.formula, M)
    ev = Evaluator(M, _handle(args))
    ok = all(ev.sat(phi, X, {}) for X in range(1 << M.n_assignments))
    print("TRUE" if ok else "FALSE")
    return EXIT_OK if ok else EXIT_FALSE


def cmd_strategies(args) -> int:
    M = load_model(args.model)
    X = parse_team(args.team, M)
    g = parse_game(args.game, M)
    found = strategies(M, g, X, engine=_handle(args))
    print(f"{len(found)} strategies")
    for i, t in enumerate(found):
        print(f"-- {i}")
        print(t.render() if len(t.prec) else "(empty transition)")
    return EXIT_OK


def cmd_successors(args) -> int:
    M = load_model(args.model)
    X = parse_team(args.team, M)
    g = parse_game(args.game, M)
    found = successors(M, g, X, engine=EngineHandle.from_env("transition"))
    print(f"{len(found)} successor teams")
    for Y in sorted(found, key=_team_key):
        print(format_team(Y))
    return EXIT_OK


def cmd_equiv(args) -> int:
    M = load_model(args.model)
    f1, f2 = parse_belief(args.f1, M), parse_belief(args.f2, M)
    ev = Evaluator(M, _handle(args))
    for X in range(1 << M.n_assignments):
        a, b = ev.sat(f1, X, {}), ev.sat(f2, X, {})
        if a != b:
            team = format_team(M.mask_to_team(X))
            print(f"disagree at {team}: f1={str(a).lower()} f2={str(b).lower()}")
            return EXIT_FALSE
    print("agree")
    return EXIT_OK


def cmd_diff(args) -> int:
    mode = {"semantics": "semantics-equivalence", "sugar": "sugar-oracle"}[args.mode]
    config = CorpusConfig(
        count=args.count,
        depth=args.depth,
        domain_max=args.domain_max,
        fragment=args.fragment,
        kind="game" if args.mode == "semantics" else "sugar",
        max_team=args.max_team if args.mode == "semantics" else 1 << 9,
    )
    reports = run_diff(gen_corpus(args.seed, config), mode, EngineHandle.from_env())
    for r in reports:
        if r.status == "agree" and not args.verbose:
            continue
        print(f"{r.status}\t{r.model_digest}\t{r.formula}")
        if r.detail:
            print(f"  {r.detail}")
        for team, a, b in r.mismatches:
            print(f"  {team}: {a} vs {b}")
    summary = DiffSummary(reports)
    print(summary)
    if summary.count("disagree"):
        return EXIT_FALSE
    return EXIT_BUDGET if summary.count("budget") else EXIT_OK


def cmd_fragment(args) -> int:
    report = S.fragment_check(parse_game(args.game))
    print(report)
    return EXIT_OK if report.in_fragment else EXIT_FALSE


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="translog", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def model_cmd(name, help, fn, team=True, engine=True):
        sp = sub.add_parser(name, help=help)
        sp.add_argument("--model", required=True, help="model file")
        if team:
            sp.add_argument("--team", required=True, help="team literal, e.g. '{x=0 y=1; x=1 y=1}'")
        if engine:
            sp.add_argument("--engine", choices=("reference", "transition"), default="reference")
        sp.set_defaults(func=fn)
        return sp

    model_cmd("check", "decide M, X |= phi", cmd_check).add_argument("--formula", required=True)
    model_cmd("truth", "decide phi on every team", cmd_truth, team=False).add_argument("--formula", required=True)
    model_cmd("strategies", "list strategies of a game", cmd_strategies, engine=False).add_argument(
        "--game", required=True
    )
    model_cmd("successors", "list successor teams of a game", cmd_successors, engine=False).add_argument(
        "--game", required=True
    )
    eq = model_cmd("equiv", "compare two formulas on every team", cmd_equiv, team=False)
    eq.add_argument("--f1", required=True)
    eq.add_argument("--f2", required=True)

    d = sub.add_parser("diff", help="differential test over a seeded corpus")
    d.add_argument("--mode", choices=("semantics", "sugar"), required=True)
    d.add_argument("--seed", type=int, required=True)
    d.add_argument("--count", type=int, required=True)
    d.add_argument("--depth", type=int, default=3)
    d.add_argument("--domain-max", type=int, default=2)
    d.add_argument("--max-team", type=int, default=4)
    d.add_argument("--fragment", choices=("transition-logic", "full"), default="transition-logic")
    d.add_argument("-v", "--verbose", action="store_true", help="print agreeing items too")
    d.set_defaults(func=cmd_diff)

    f = sub.add_parser("fragment", help="check membership in the Transition Logic fragment")
    f.add_argument("--game", required=True)
    f.set_defaults(func=cmd_fragment)
    return p


def main(argv=None) -> int:
    for stream in (sys.stdout, sys.stderr):
        if hasattr(stream, "reconfigure"):
            stream.reconfigure(encoding="utf-8")
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BudgetExceeded as e:
        print(f"budget exceeded: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except (TranslogError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
