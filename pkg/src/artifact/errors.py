"""Exception hierarchy.  Every error carries an optional ``witness``."""
from __future__ import annotations


class LocaleError(Exception):
    """Base class; ``witness`` names the offending elements when known."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class InvalidInput(LocaleError):
    """Input data breaks a structural law (exit code 1 in the CLI)."""


class NotAPoset(InvalidInput):
    pass


class NotALattice(InvalidInput):
    pass


class NotDistributive(InvalidInput):
    pass


class NotMonotone(InvalidInput):
    pass


class NotMeetPreserving(InvalidInput):
    pass


class NotJoinPreserving(InvalidInput):
    pass


class NotAFrameMap(InvalidInput):
    pass


class NotANucleus(InvalidInput):
    pass


class NotAClosureOperator(InvalidInput):
    pass


class NotAnEMOrder(InvalidInput):
    pass


class CodomainMismatch(InvalidInput):
    pass


class NotSquare(InvalidInput):
    pass


class AmbientMismatch(InvalidInput):
    pass


class BaseMismatch(InvalidInput):
    pass


class FrameMismatch(InvalidInput):
    pass


class NotComposable(InvalidInput):
    pass


class HypothesisViolated(InvalidInput):
    pass


class BottomNotPreserved(InvalidInput):
    pass


class JoinsNotPreserved(InvalidInput):
    pass


class NotParallel(InvalidInput):
    pass


class SourceNotOpen(LocaleError):
    pass


class TargetNotOpen(LocaleError):
    pass


class SizeCapExceeded(LocaleError):
    pass


class InternalInvariantViolation(LocaleError):
    """A proven law failed on a concrete instance: this is an engine bug."""


class ParseError(InvalidInput):
    def __init__(self, message, line, col):
        super().__init__(f"{line}:{col}: {message}", witness=(line, col))
        self.line = line
        self.col = col


class ValidationError(InvalidInput):
    """A workspace item failed a semantic check; ``cause`` keeps the original error."""

    def __init__(self, item, message, witness=None, line=None, cause=None):
        where = f"line {line}: " if line is not None else ""
        super().__init__(f"{where}{item}: {message}", witness=witness)
        self.item = item
        self.line = line
        self.cause = cause


class UnknownName(InvalidInput):
    pass
