"""Differential runners comparing the two engines, and native vs. encoded clauses."""

from __future__ import annotations

from dataclasses import dataclass, field

from translog import syntax as S
from translog.corpus import Corpus, CorpusItem
from translog.desugar import desugar
from translog.errors import BudgetExceeded
from translog.model import format_team
from translog.reference import EngineHandle, Evaluator

MODES = ("semantics-equivalence", "sugar-oracle")
STATUSES = ("agree", "disagree", "budget", "outside-fragment")


@dataclass(frozen=True)
class DiffReport:
    formula: str
    model_digest: str
    mismatches: tuple = ()  # (team, first verdict, second verdict) as text
    status: str = "agree"
    detail: str = ""
    label: str = ""

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status!r}")
        if (self.status == "disagree") != bool(self.mismatches):
            raise ValueError("status must be 'disagree' exactly when there are mismatches")


@dataclass
class DiffSummary:
    reports: list = field(default_factory=list)

    def count(self, status: str) -> int:
        return sum(r.status == status for r in self.reports)

    @property
    def ok(self) -> bool:
        return self.count("disagree") == 0

    def __str__(self):
        parts = [f"{s}={self.count(s)}" for s in STATUSES]
        return f"items={len(self.reports)} " + " ".join(parts)


def _teams_text(M, masks) -> str:
    return "{" + ", ".join(format_team(M.mask_to_team(int(Y))) for Y in sorted(masks)) + "}"


def diff_semantics(item: CorpusItem, handle: EngineHandle | None = None) -> DiffReport:
    """Reference target teams vs. transition-engine successors on every team of ``item``."""
    M, g = item.model, item.formula
    text, digest = S.to_text(g), M.digest()
    report = S.fragment_check(g)
    if not report.in_fragment:
        node, reason = report.violations[0]
        return DiffReport(text, digest, status="outside-fragment",
                          detail=f"outside Transition Logic: {reason} at {S.to_text(node)}", label=item.label)
    handle = handle or EngineHandle.from_env()
    ref = Evaluator(M, EngineHandle("reference", handle.max_intermediate, handle.max_star_depth))
    tra = Evaluator(M, EngineHandle("transition", handle.max_intermediate, handle.max_star_depth))
    mismatches = []
    try:
        for X in item.teams:
            a = set(ref.game_posts(g, X, {}).tolist())
            b = set(tra.game_posts(g, X, {}).tolist())
            if a != b:
                mismatches.append((format_team(M.mask_to_team(X)), _teams_text(M, a), _teams_text(M, b)))
    except BudgetExceeded as e:
        return DiffReport(text, digest, tuple(mismatches), "disagree" if mismatches else "budget",
                          detail=str(e), label=item.label)
    return DiffReport(text, digest, tuple(mismatches), "disagree" if mismatches else "agree", label=item.label)


def diff_sugar(item: CorpusItem, handle: EngineHandle | None = None) -> DiffReport:
    """Native satisfaction vs. satisfaction of the desugared formula on every team."""
    M, phi = item.model, item.formula
    text, digest = S.to_text(phi), M.digest()
    handle = handle or EngineHandle.from_env()
    core = desugar(phi)
    native, encoded = Evaluator(M, handle), Evaluator(M, handle)
    mismatches = []
    try:
        for X in item.teams:
            a, b = native.sat(phi, X, {}), encoded.sat(core, X, {})
            if a != b:
                mismatches.append((format_team(M.mask_to_team(X)), str(a).lower(), str(b).lower()))
    except BudgetExceeded as e:
        return DiffReport(text, digest, tuple(mismatches), "disagree" if mismatches else "budget",
                          detail=str(e), label=item.label)
    return DiffReport(text, digest, tuple(mismatches), "disagree" if mismatches else "agree", label=item.label)


def run_diff(corpus: Corpus | list, mode: str, handle: EngineHandle | None = None) -> list:
    """One report per corpus item, in corpus order. Budget trips never abort the run."""
    if mode not in MODES:
        raise ValueError(f"unknown diff mode {mode!r}")
    check = diff_semantics if mode == "semantics-equivalence" else diff_sugar
    return [check(item, handle) for item in corpus]
