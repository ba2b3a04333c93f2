"""Model checker for first-order dynamic game logic with imperfect information."""

from translog.errors import (
    BudgetExceeded,
    EvaluationError,
    FormulaSyntaxError,
    FragmentError,
    ModelError,
    TransitionError,
    TranslogError,
)
from translog.model import Assignment, Model, eval_term, extend, supplement, duplicate, restrict, equiv_mod
from translog.parser import parse_belief, parse_game
from translog.syntax import affected_vars, fragment_check
from translog.desugar import desugar
from translog.transitions import (
    Transition,
    compose,
    union,
    parallel,
    is_independent,
    hide_game,
    concat_game,
    choice_game,
)
from translog.reference import EngineHandle, strategies, is_strategy, satisfies, is_true
from translog.transition_engine import successors, admissible

__version__ = "0.1.0"
