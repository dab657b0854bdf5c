"""Exception taxonomy.

Two broad families matter to callers: InputError for anything wrong with the
documents or arguments handed to us (the CLI maps these to exit code 2), and
DomainFailure for well-formed inputs whose answer is a refusal (exit code 1).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional


@dataclass(frozen=True)
class Pos:
    """A position inside a source document."""

    source: str
    line: int
    col: int

    def __str__(self) -> str:
        return f"{self.source}:{self.line}:{self.col}"


class StratakbError(Exception):
    pass


class InputError(StratakbError):
    """Malformed or unusable input: documents, values, arguments."""

    def __init__(self, message: str, pos: Optional[Pos] = None):
        self.message = message
        self.pos = pos
        super().__init__(f"{pos}: {message}" if pos else message)


class DomainFailure(StratakbError):
    """A well-posed question whose answer is 'no'."""


# --- document-level errors -------------------------------------------------

class ModelSyntaxError(InputError):
    pass


class UnknownSymbolError(InputError):
    pass


class UnknownScaleError(InputError):
    pass


class LevelViolationError(InputError):
    pass


class QuantifierRejectedError(InputError):
    """The formula language is quantifier-free; 'forall'/'exists' are refused."""


class DuplicateSymbolError(InputError):
    pass


class BadArityError(InputError):
    pass


class EmptyLevelZeroError(InputError):
    pass


class InvalidSignatureError(InputError):
    pass


class ScaleMismatchError(InputError):
    pass


class ArityMismatchError(InputError):
    pass


class FunctionalConflictError(InputError):
    """Two rows of a functional table share arguments but disagree on results."""


class DeltaWithoutUnknownError(InputError):
    pass


class SecondOrderInDeltaError(InputError):
    pass


class EmptyOutputError(InputError):
    pass


class UnboundVariableError(StratakbError):
    pass


class NotRelevantError(InputError):
    """A candidate system strays outside the base value domain."""


class UnboundedUnknownError(InputError):
    def __init__(self, unknown: str, reason: str):
        self.unknown = unknown
        self.reason = reason
        super().__init__(f"no finite domain for unknown '{unknown}': {reason}")


class OrderTooLowError(DomainFailure):
    pass


class NonTableInterpretationError(InputError):
    pass


class SignatureMismatchError(InputError):
    pass


class BoundExceededError(InputError):
    pass


class NoFactsError(InputError):
    pass


class GenerationFailedError(InputError):
    pass


class EmptyCorpusError(InputError):
    pass


class ZeroDiameterError(InputError):
    pass


class PackError(InputError):
    pass
