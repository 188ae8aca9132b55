"""Exception types shared across the workbench.

The hierarchy distinguishes bad inputs (shape/value problems, exit code 1)
from incoherent belief specifications (exit code 2). Anything else that
escapes is an internal error (exit code 3).
"""


class WorkbenchError(Exception):
    """Base class for all workbench errors."""


class InputError(WorkbenchError):
    """Bad input: malformed files, invalid values, unknown ids."""

    exit_code = 1


class IncoherenceError(WorkbenchError):
    """A belief specification that contradicts itself."""

    exit_code = 2


class InvalidMatrix(InputError, ValueError):
    """Matrix contains non-finite entries or is otherwise unusable."""


class ShapeError(InputError, ValueError):
    """Dimension mismatch between related quantities."""


class InvalidInput(InputError, ValueError):
    """A scalar or structural argument outside its allowed range."""


class SchemaError(InputError, ValueError):
    """A document or file violates its declared schema."""


class UnknownDocument(InputError, KeyError):
    """Store lookup for an id that does not exist."""


class EmptyClass(InputError):
    """A co-exchangeable class with no observed outputs."""


class IncompleteModel(InputError):
    """A model output batch missing a (model, variable) value."""

    def __init__(self, model_id: str, variable: str):
        super().__init__(f"model {model_id!r} supplies no value for variable {variable!r}")
        self.model_id = model_id
        self.variable = variable


class CoherenceError(IncoherenceError):
    """A joint second-order specification fails the coherence conditions."""


class IncoherentElicitation(IncoherenceError):
    """Elicited judgements that cannot come from any coherent belief state.

    Raised e.g. when the implied discrepancy variance is indefinite, which
    signals that the prior judgements over-claim how informative the model
    classes can be.
    """


class IncoherentStep(IncoherenceError):
    """An elicitation answer that would break positive definiteness."""

    def __init__(self, message: str, margin: float | None = None):
        super().__init__(message)
        self.margin = margin


class DegenerateConditioning(IncoherenceError):
    """The conditional-prevision system for a step is singular."""


class IncompleteRules(InputError):
    """Separation rules that do not cover every missing covariance entry."""


class SessionClosed(WorkbenchError):
    """Operation on a finalized elicitation session."""
