class TranslogError(Exception):
    """Base class for every error raised by translog."""


class ModelError(TranslogError):
    """A model, assignment or team violates its invariants."""


class EvaluationError(TranslogError):
    """A term or formula cannot be evaluated (unbound or malformed)."""


class ChoiceFunctionError(TranslogError, ValueError):
    pass


class TransitionError(TranslogError, ValueError):
    """An operation on transitions received incompatible arguments."""


class FormulaSyntaxError(TranslogError):
    def __init__(self, message: str, pos: int | None = None, text: str | None = None):
        self.pos = pos
        self.text = text
        if pos is not None:
            message = f"{message} (at position {pos})"
        super().__init__(message)


class FragmentError(TranslogError):
    """Raised when the transition engine meets a formula outside Transition Logic."""


class BudgetExceeded(TranslogError):
    """A resource budget tripped. Never a semantic verdict."""
